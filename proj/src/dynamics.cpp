#include "modsurf/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace modsurf {

bool is_valid_word(const Word& w) {
    if (w.empty()) return false;
    return std::all_of(w.begin(), w.end(), [](char c) { return c == '1' || c == '2'; });
}

bool is_mixed(const Word& w) {
    return w.find('1') != Word::npos && w.find('2') != Word::npos;
}

std::pair<double, Letter> farey_step(double x) {
    if (!(x > 0.0)) throw validation_error("interval map requires x > 0");
    if (x == 1.0) throw validation_error("interval map undefined at the branch point x = 1");
    if (x < 1.0) return {x / (1.0 - x), Letter::L1};
    return {x - 1.0, Letter::L2};
}

std::pair<QuadraticIrrational, Letter> farey_step(const QuadraticIrrational& x) {
    if (!x.greater_than(0))
        throw validation_error("interval map requires x > 0");
    const long long p = x.p(), q = x.q(), D = x.D();
    if (x.greater_than(1)) {
        // x - 1 = (p - q + sqrt(D)) / q
        return {QuadraticIrrational(p - q, q, D), Letter::L2};
    }
    // x/(1-x) = ((p(q-p) + D) / q + sqrt(D)) / (((q-p)^2 - D) / q).
    // Both divisions are exact because q | D - p^2, and the new denominator
    // is positive because x < 1.
    long long p2 = (p * (q - p) + D) / q;
    long long q2 = ((q - p) * (q - p) - D) / q;
    return {QuadraticIrrational(p2, q2, D), Letter::L1};
}

Word orbit_code(double x, int n) {
    if (n < 0) throw validation_error("orbit length must be nonnegative");
    Word code;
    code.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (!(x > 1e-12) || std::abs(x - 1.0) < 1e-12)
            throw validation_error(
                "orbit hit a branch boundary (rational input or numerical degeneracy)");
        auto [y, letter] = farey_step(x);
        code.push_back(static_cast<char>(letter));
        x = y;
    }
    return code;
}

Word orbit_code(const QuadraticIrrational& x, int n) {
    if (n < 0) throw validation_error("orbit length must be nonnegative");
    Word code;
    code.reserve(static_cast<size_t>(n));
    QuadraticIrrational cur = x;
    for (int i = 0; i < n; ++i) {
        auto [y, letter] = farey_step(cur);
        code.push_back(static_cast<char>(letter));
        cur = y;
    }
    return code;
}

QuadraticIrrational farey_iterate(const QuadraticIrrational& x, int n) {
    QuadraticIrrational cur = x;
    for (int i = 0; i < n; ++i) cur = farey_step(cur).first;
    return cur;
}

GroupElement word_matrix(const Word& w) {
    if (!is_valid_word(w)) throw validation_error("word must be non-empty over {1,2}");
    GroupElement m = GroupElement::identity();
    for (char ch : w) m = compose(m, ch == '1' ? gen_T1() : gen_T2());
    return m;
}

size_t least_rotation(const Word& w) {
    // Booth's least-rotation algorithm, O(n).
    const std::string t = w + w;
    const size_t n = t.size();
    std::vector<ptrdiff_t> f(n, -1);
    size_t k = 0;
    for (size_t j = 1; j < n; ++j) {
        char sj = t[j];
        ptrdiff_t i = f[j - k - 1];
        while (i != -1 && sj != t[k + static_cast<size_t>(i) + 1]) {
            if (sj < t[k + static_cast<size_t>(i) + 1]) k = j - static_cast<size_t>(i) - 1;
            i = f[static_cast<size_t>(i)];
        }
        if (sj != t[k + static_cast<size_t>(i) + 1]) {
            if (sj < t[k]) k = j;
            f[j - k] = -1;
        } else {
            f[j - k] = i + 1;
        }
    }
    return k % w.size();
}

Necklace canonicalize(const Word& w) {
    if (!is_valid_word(w)) throw validation_error("word must be non-empty over {1,2}");
    if (!is_mixed(w))
        throw validation_error("single-letter words are parabolic and carry no necklace");
    size_t k = least_rotation(w);
    return Necklace{w.substr(k) + w.substr(0, k)};
}

bool is_primitive(const Word& w) {
    if (!is_valid_word(w)) throw validation_error("word must be non-empty over {1,2}");
    const size_t n = w.size();
    for (size_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool periodic = true;
        for (size_t i = d; i < n && periodic; ++i)
            periodic = (w[i] == w[i - d]);
        if (periodic) return false;
    }
    return true;
}

namespace {

struct NecklaceDfs {
    long long max_trace;
    size_t len_cap; // mixed words of length n have trace >= n+1
    std::vector<std::pair<Necklace, long long>> out;
    Word word;

    // Entries of the running product are nonnegative, and the trace a+d is
    // nondecreasing under appending either letter, so the trace test prunes.
    void run(char first) {
        word.assign(1, first);
        if (first == '1')
            step(1, 0, 1, 1);
        else
            step(1, 1, 0, 1);
        word.clear();
    }

    void step(long long a, long long b, long long c, long long d) {
        const long long tr = a + d;
        if (tr <= max_trace && word.size() >= 2 && is_mixed(word) &&
            least_rotation(word) == 0 && is_primitive(word)) {
            out.emplace_back(Necklace{word}, tr);
        }
        if (tr > max_trace || word.size() >= len_cap) return;
        word.push_back('1');
        step(a + b, b, c + d, d);
        word.back() = '2';
        step(a, a + b, c, c + d);
        word.pop_back();
    }
};

} // namespace

std::vector<std::pair<Necklace, long long>> enumerate_necklaces(long long max_trace) {
    std::vector<std::pair<Necklace, long long>> result;
    if (max_trace < 3) return result;
    NecklaceDfs dfs;
    dfs.max_trace = max_trace;
    dfs.len_cap = static_cast<size_t>(max_trace - 1);
    dfs.run('1');
    for (auto& e : dfs.out) result.push_back(std::move(e));
    dfs.out.clear();
    dfs.run('2');
    for (auto& e : dfs.out) result.push_back(std::move(e));
    std::sort(result.begin(), result.end(), [](const auto& x, const auto& y) {
        if (x.second != y.second) return x.second < y.second;
        return x.first.canonical < y.first.canonical;
    });
    return result;
}

QuadraticIrrational fixed_point(const GroupElement& g) {
    if (!is_hyperbolic(g))
        throw validation_error("fixed point in quadratic form requires a hyperbolic element");
    if (g.c() == 0)
        throw validation_error("fixed point at infinity (c = 0)");
    // Normalization guarantees c > 0. The formula picks the root
    // ((a-d) + sqrt(tr^2-4)) / (2c), which is the attracting fixed point
    // whenever the representative's trace a+d is positive (true for every
    // word matrix); for a negative-trace representative it is the fixed
    // point attracting under the inverse. Both are fixed by g.
    if (trace(g) > (int128{1} << 30) || (g.c() > (int128{1} << 30)))
        throw overflow_error("fixed point entries exceed the supported range");
    const auto a = static_cast<long long>(g.a());
    const auto c = static_cast<long long>(g.c());
    const auto d = static_cast<long long>(g.d());
    const long long tr = a + d;
    return QuadraticIrrational(a - d, 2 * c, tr * tr - 4);
}

} // namespace modsurf
