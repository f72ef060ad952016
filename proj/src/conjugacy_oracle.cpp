#include <algorithm>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "modsurf/errors.hpp"
#include "modsurf/lengths.hpp"
#include "modsurf/psl2.hpp"

namespace modsurf {

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

bool lex_less(const GroupElement& x, const GroupElement& y) {
    if (x.a() != y.a()) return x.a() < y.a();
    if (x.b() != y.b()) return x.b() < y.b();
    if (x.c() != y.c()) return x.c() < y.c();
    return x.d() < y.d();
}

// All products of at most `radius` letters from {S, T, T^-1, T1, T1^-1}
// (a symmetric generating set of the full group), deduplicated, paired with
// their inverses so conjugation needs no repeated inversion.
std::vector<std::pair<GroupElement, GroupElement>> conjugator_ball(int radius) {
    const std::vector<GroupElement> letters = {gen_S(), gen_T(), inverse(gen_T()), gen_T1(),
                                               inverse(gen_T1())};
    std::unordered_set<GroupElement> seen;
    std::vector<GroupElement> frontier = {GroupElement::identity()};
    seen.insert(frontier.front());
    std::vector<GroupElement> all = frontier;
    for (int depth = 0; depth < radius; ++depth) {
        std::vector<GroupElement> next;
        for (const GroupElement& g : frontier) {
            for (const GroupElement& l : letters) {
                GroupElement h = compose(g, l);
                if (seen.insert(h).second) next.push_back(h);
            }
        }
        all.insert(all.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    std::vector<std::pair<GroupElement, GroupElement>> out;
    out.reserve(all.size());
    for (const GroupElement& h : all) out.emplace_back(h, inverse(h));
    return out;
}

// Depth-first enumeration of all generator-word products with trace at most
// max_trace. Partial products have nonnegative entries and appending a letter
// never decreases the trace, which justifies the prune.
void collect_elements(long long max_trace, int bound,
                      std::unordered_set<GroupElement>& out) {
    struct Dfs {
        long long max_trace;
        int bound;
        std::unordered_set<GroupElement>* out;
        void step(long long a, long long b, long long c, long long d, int len) {
            const long long tr = a + d;
            if (tr > max_trace) return;
            if (len >= 1 && tr >= 3) out->insert(GroupElement(a, b, c, d));
            if (len >= bound) return;
            step(a + b, b, c + d, d, len + 1);  // append the lower-triangular letter
            step(a, a + b, c, c + d, len + 1);  // append the upper-triangular letter
        }
    };
    Dfs dfs{max_trace, bound, &out};
    dfs.step(1, 0, 0, 1, 0);
}

// Partition one trace bucket into conjugacy classes using the given
// conjugator ball. Returns class labels in first-occurrence order.
std::vector<int> classes_in_bucket(const std::vector<GroupElement>& bucket,
                                   const std::vector<std::pair<GroupElement, GroupElement>>& ball) {
    const int n = static_cast<int>(bucket.size());
    UnionFind uf(n);
    std::unordered_map<GroupElement, int> index;
    index.reserve(bucket.size());
    for (int i = 0; i < n; ++i) index.emplace(bucket[i], i);
    for (int i = 0; i < n; ++i) {
        if (uf.find(i) != i) continue;  // already merged into an earlier class
        for (const auto& [h, h_inv] : ball) {
            const GroupElement conj = compose(compose(h, bucket[i]), h_inv);
            if (auto it = index.find(conj); it != index.end()) uf.unite(i, it->second);
        }
    }
    std::vector<int> labels(n, -1);
    int next_label = 0;
    for (int i = 0; i < n; ++i) {
        const int root = uf.find(i);
        if (labels[root] == -1) labels[root] = next_label++;
        labels[i] = labels[root];
    }
    return labels;
}

GroupElement power(const GroupElement& g, int k) {
    GroupElement r = GroupElement::identity();
    for (int i = 0; i < k; ++i) r = compose(r, g);
    return r;
}

}  // namespace

std::map<long long, long long> conjugacy_oracle(long long max_trace, int word_length_bound) {
    if (word_length_bound < 2 || word_length_bound > 16)
        throw validation_error("conjugacy oracle requires 2 <= word_length_bound <= 16");
    if (max_trace < 2)
        throw validation_error("conjugacy oracle requires max_trace >= 2");

    std::unordered_set<GroupElement> element_set;
    collect_elements(max_trace, word_length_bound, element_set);

    std::map<long long, std::vector<GroupElement>> buckets;
    for (const GroupElement& g : element_set)
        buckets[static_cast<long long>(trace(g))].push_back(g);
    for (auto& [tr, bucket] : buckets) std::sort(bucket.begin(), bucket.end(), lex_less);

    const auto ball = conjugator_ball(6);
    const auto ball_check = conjugator_ball(7);

    // Class partition per trace, with a stability check at the larger radius:
    // an unresolved pair would merge only at the wider search, and that must
    // be reported, not silently accepted.
    std::map<long long, std::vector<int>> labels;
    std::map<long long, int> class_count;
    for (const auto& [tr, bucket] : buckets) {
        std::vector<int> l6 = classes_in_bucket(bucket, ball);
        std::vector<int> l7 = classes_in_bucket(bucket, ball_check);
        if (l6 != l7)
            throw convergence_error(
                "conjugacy classes at trace " + std::to_string(tr) +
                " not resolved within the conjugator bound");
        class_count[tr] = 1 + *std::max_element(l6.begin(), l6.end());
        labels[tr] = std::move(l6);
    }

    // Representative of each class: first bucket element carrying the label.
    std::map<long long, std::vector<GroupElement>> reps;
    for (const auto& [tr, bucket] : buckets) {
        std::vector<GroupElement> r(static_cast<size_t>(class_count[tr]),
                                    GroupElement::identity());
        std::vector<bool> seen(static_cast<size_t>(class_count[tr]), false);
        for (size_t i = 0; i < bucket.size(); ++i) {
            const int l = labels[tr][i];
            if (!seen[static_cast<size_t>(l)]) {
                seen[static_cast<size_t>(l)] = true;
                r[static_cast<size_t>(l)] = bucket[i];
            }
        }
        reps[tr] = std::move(r);
    }

    // Primitivity by power witness: the k-th power of a class with trace t'
    // lands in the bucket of the Chebyshev-recurrence trace; any class hit
    // that way is imprimitive.
    std::map<long long, std::vector<bool>> imprimitive;
    for (const auto& [tr, r] : reps)
        imprimitive[tr] = std::vector<bool>(r.size(), false);

    for (const auto& [tr_base, base_reps] : reps) {
        long long u_prev = 2, u_cur = tr_base;  // traces of the 0th and 1st powers
        for (int k = 2;; ++k) {
            const long long u_next = tr_base * u_cur - u_prev;
            u_prev = u_cur;
            u_cur = u_next;
            if (u_next > max_trace) break;
            for (const GroupElement& p : base_reps) {
                const GroupElement q = power(p, k);
                const auto bucket_it = buckets.find(u_next);
                bool matched = false;
                if (bucket_it != buckets.end()) {
                    const std::vector<GroupElement>& bucket = bucket_it->second;
                    // Fast path: the power itself was enumerated.
                    for (size_t i = 0; i < bucket.size() && !matched; ++i) {
                        if (bucket[i] == q) {
                            imprimitive[u_next][static_cast<size_t>(labels[u_next][i])] = true;
                            matched = true;
                        }
                    }
                    if (!matched) {
                        // Conjugation search against class representatives.
                        for (const auto& [h, h_inv] : ball) {
                            const GroupElement conj = compose(compose(h, q), h_inv);
                            for (size_t i = 0; i < bucket.size(); ++i) {
                                if (bucket[i] == conj) {
                                    imprimitive[u_next][static_cast<size_t>(labels[u_next][i])] =
                                        true;
                                    matched = true;
                                    break;
                                }
                            }
                            if (matched) break;
                        }
                    }
                }
                if (!matched)
                    throw convergence_error(
                        "power witness at trace " + std::to_string(u_next) +
                        " not matched to any class within the enumeration bound");
            }
        }
    }

    std::map<long long, long long> counts;
    for (const auto& [tr, flags] : imprimitive) {
        long long primitive = 0;
        for (bool f : flags)
            if (!f) ++primitive;
        if (primitive > 0) counts[tr] = primitive;
    }
    return counts;
}

}  // namespace modsurf
