#pragma once

#include <string>
#include <utility>
#include <vector>

#include "modsurf/psl2.hpp"
#include "modsurf/quadratic.hpp"

namespace modsurf {

// Symbolic dynamics of the two-branch interval map
//   F(x) = x/(1-x)  on (0,1)   (branch letter L1, generator T1)
//   F(x) = x - 1    on (1,oo)  (branch letter L2, generator T2)
// whose periodic orbits code the closed geodesics of the modular surface.

enum class Letter : char { L1 = '1', L2 = '2' };

// A word is a non-empty string over {'1','2'}; '1' stands for T1 = [[1,0],[1,1]]
// and '2' for T2 = [[1,1],[0,1]].
using Word = std::string;

bool is_valid_word(const Word& w);
bool is_mixed(const Word& w); // contains both letters

// One step of the interval map on a positive real. Returns the image and the
// branch letter. Throws validation_error for x <= 0 or x == 1 (branch point).
std::pair<double, Letter> farey_step(double x);

// Exact step on a quadratic irrational in (0,oo). The normal form is closed
// under both branches (same D, q stays positive).
std::pair<QuadraticIrrational, Letter> farey_step(const QuadraticIrrational& x);

// First n branch letters of the forward orbit of x. Throws validation_error
// if an iterate hits a branch boundary (x <= 0 or x == 1 within 1e-12),
// which signals rational input or numerical degeneracy.
Word orbit_code(double x, int n);

// Exact orbit code for a quadratic irrational (never hits a boundary).
Word orbit_code(const QuadraticIrrational& x, int n);

// Exact n-fold application of the map.
QuadraticIrrational farey_iterate(const QuadraticIrrational& x, int n);

// Ordered product of the letters' generator matrices.
GroupElement word_matrix(const Word& w);

// A necklace is a cyclic equivalence class of words, represented by the
// lexicographically least rotation ('1' < '2'), restricted to primitive
// (aperiodic) words. Necklaces are exactly the periodic orbits of the map.
struct Necklace {
    Word canonical;

    bool operator==(const Necklace& o) const = default;
    bool operator<(const Necklace& o) const { return canonical < o.canonical; }
};

// Index of the least rotation (Booth's algorithm).
size_t least_rotation(const Word& w);

// Least cyclic rotation of a mixed word. Throws validation_error for
// single-letter-alphabet words (their matrices are parabolic, not coded).
Necklace canonicalize(const Word& w);

// True iff w is not a proper power of a shorter word.
bool is_primitive(const Word& w);

// All primitive necklaces whose word matrix has trace <= max_trace, each
// exactly once, sorted by (trace, canonical word). Requires max_trace >= 3
// (below 3 the list is empty; max_trace < 3 simply yields {}).
std::vector<std::pair<Necklace, long long>> enumerate_necklaces(long long max_trace);

// Attracting fixed point x = ((a-d) + sqrt(tr^2-4)) / (2c) of a hyperbolic
// element. Throws validation_error if g is not hyperbolic or c == 0
// (fixed point at infinity; cannot occur for necklace matrices).
QuadraticIrrational fixed_point(const GroupElement& g);

} // namespace modsurf
