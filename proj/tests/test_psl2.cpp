#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "modsurf/errors.hpp"
#include "modsurf/psl2.hpp"

using namespace modsurf;

namespace {

// Deterministic sample of elements: all generator words of length <= 5.
std::vector<GroupElement> sample_elements() {
    const std::vector<GroupElement> gens = {gen_S(), gen_T(), gen_T1()};
    std::vector<GroupElement> out = {GroupElement::identity()};
    std::vector<GroupElement> frontier = out;
    for (int len = 0; len < 5; ++len) {
        std::vector<GroupElement> next;
        for (const auto& g : frontier)
            for (const auto& h : gens) next.push_back(compose(g, h));
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

}  // namespace

TEST_CASE("generators and sign normalization") {
    CHECK(gen_S() == GroupElement(0, -1, 1, 0));
    CHECK(gen_T() == gen_T2());
    CHECK(gen_T() == GroupElement(1, 1, 0, 1));
    CHECK(gen_T1() == GroupElement(1, 0, 1, 1));
    // Elements are taken mod +-I; the stored representative has c > 0 or
    // (c == 0 and a > 0).
    CHECK(GroupElement(0, 1, -1, 0) == gen_S());
    CHECK(GroupElement(-1, -5, 0, -1) == GroupElement(1, 5, 0, 1));
    for (const auto& g : sample_elements()) {
        CHECK((g.c() > 0 || (g.c() == 0 && g.a() > 0)));
        CHECK(g.a() * g.d() - g.b() * g.c() == 1);
    }
}

TEST_CASE("unit determinant is enforced") {
    CHECK_THROWS_AS(GroupElement(1, 1, 1, 1), validation_error);
    CHECK_THROWS_AS(GroupElement(2, 0, 0, 2), validation_error);
    CHECK_THROWS_AS(GroupElement(0, 0, 0, 0), validation_error);
}

TEST_CASE("group relations: S^2 = (ST)^3 = identity") {
    const GroupElement S = gen_S(), T = gen_T();
    CHECK(is_identity(compose(S, S)));
    const GroupElement ST = compose(S, T);
    CHECK(is_identity(compose(ST, compose(ST, ST))));
    CHECK_FALSE(is_identity(S));
    CHECK_FALSE(is_identity(T));
}

TEST_CASE("inverses and associativity") {
    const auto elems = sample_elements();
    for (const auto& g : elems) {
        CHECK(is_identity(compose(g, inverse(g))));
        CHECK(is_identity(compose(inverse(g), g)));
    }
    const GroupElement A = compose(gen_T(), gen_S());
    const GroupElement B = compose(gen_T1(), gen_T());
    const GroupElement C = compose(gen_S(), gen_T1());
    CHECK(compose(compose(A, B), C) == compose(A, compose(B, C)));
}

TEST_CASE("inverse of [[1,1],[1,2]] equals [[2,-1],[-1,1]] mod +-I") {
    const GroupElement g(1, 1, 1, 2);
    CHECK(inverse(g) == GroupElement(2, -1, -1, 1));
    // The stored representative still satisfies the sign normalization.
    const GroupElement inv = inverse(g);
    CHECK(inv.c() > 0);
}

TEST_CASE("trace and hyperbolicity") {
    CHECK(trace(gen_T()) == 2);
    CHECK(trace(gen_S()) == 0);
    CHECK(trace(GroupElement(1, 1, 1, 2)) == 3);
    // Trace is |a + d|, well defined mod +-I.
    CHECK(trace(GroupElement(-3, -1, 1, 0)) == 3);
    CHECK_FALSE(is_hyperbolic(gen_T()));
    CHECK_FALSE(is_hyperbolic(gen_S()));
    CHECK(is_hyperbolic(GroupElement(1, 1, 1, 2)));
    CHECK(is_hyperbolic(GroupElement(-3, -1, 1, 0)));
}

TEST_CASE("trace is a conjugacy invariant") {
    const GroupElement g(1, 1, 1, 2);
    for (const auto& h : sample_elements())
        CHECK(trace(compose(compose(h, g), inverse(h))) == trace(g));
}

TEST_CASE("Moebius action on P^1(R)") {
    const GroupElement S = gen_S(), T = gen_T();
    CHECK(mobius(T, 1.5).value == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(mobius(S, 2.0).value == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(mobius(S, 0.0).infinite);
    CHECK(mobius(T, ExtendedReal::inf()).infinite);
    const ExtendedReal s_inf = mobius(S, ExtendedReal::inf());
    CHECK_FALSE(s_inf.infinite);
    CHECK(s_inf.value == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("Moebius action is a homomorphism") {
    const std::vector<GroupElement> gs = {gen_S(), gen_T(), gen_T1(),
                                          GroupElement(1, 1, 1, 2)};
    const std::vector<double> xs = {0.37, 1.0, 2.25, -3.5};
    for (const auto& g : gs)
        for (const auto& h : gs)
            for (double x : xs) {
                const ExtendedReal lhs = mobius(compose(g, h), x);
                const ExtendedReal rhs = mobius(g, mobius(h, x));
                REQUIRE(lhs.infinite == rhs.infinite);
                if (!lhs.infinite)
                    CHECK(lhs.value == doctest::Approx(rhs.value).epsilon(1e-12));
            }
}

TEST_CASE("entry overflow throws instead of wrapping") {
    GroupElement g(2, 1, 1, 1);
    auto grow = [&] {
        for (int i = 0; i < 200; ++i) g = compose(g, g);
    };
    CHECK_THROWS_AS(grow(), overflow_error);
}

TEST_CASE("string rendering") {
    CHECK(int128_to_string(int128{0}) == "0");
    CHECK(int128_to_string(int128{-7}) == "-7");
    CHECK(int128_to_string(int128{1} << 62) == "4611686018427387904");
    CHECK(GroupElement(1, 1, 1, 2).to_string() == "[[1,1],[1,2]]");
}
