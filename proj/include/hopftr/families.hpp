#pragma once

#include "hopftr/combo.hpp"
#include "hopftr/rational.hpp"
#include "hopftr/tagged_graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace hopftr {

struct BoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Integer catalan(unsigned n) {
    return factorial(2 * n) / (factorial(n) * factorial(n + 1));
}

inline long max_work_budget() {
    if (const char* env = std::getenv("HOPF_TR_MAX_WORK")) {
        long v = std::atol(env);
        if (v > 0) return v;
    }
    return 4000000;
}

inline void charge_work(const Integer& units) {
    if (units > max_work_budget())
        throw BoundError("enumeration exceeds the configured work budget (HOPF_TR_MAX_WORK)");
}

// ---------------------------------------------------------------------------
// Shapes and plain families
// ---------------------------------------------------------------------------

/// All planar binary tree shapes with the given number of trivalent vertices.
inline std::vector<TreeShape> enumerate_shapes(int degree) {
    if (degree < 0) return {};
    std::vector<std::vector<TreeShape>> table(size_t(degree) + 1);
    table[0] = {TreeShape::leaf()};
    for (int d = 1; d <= degree; ++d)
        for (int i = 0; i < d; ++i)
            for (auto& l : table[size_t(i)])
                for (auto& r : table[size_t(d - 1 - i)])
                    table[size_t(d)].push_back(TreeShape::graft(l, r));
    return table[size_t(degree)];
}

/// Balanced pairings with `loops` pairs on `slots` positions (0-based pairs).
inline std::vector<std::vector<std::pair<int, int>>> balanced_pairings(int slots, int loops) {
    std::vector<std::vector<std::pair<int, int>>> out;
    std::vector<std::pair<int, int>> current;
    std::vector<int> pair_of(size_t(slots), -1);
    auto rec = [&](auto&& self, int remaining, int min_first) -> void {
        if (remaining == 0) {
            if (pairing_is_balanced(pair_of)) out.push_back(current);
            return;
        }
        for (int a = min_first; a < slots; ++a) {
            if (pair_of[size_t(a)] >= 0) continue;
            for (int b = a + 1; b < slots; ++b) {
                if (pair_of[size_t(b)] >= 0) continue;
                pair_of[size_t(a)] = pair_of[size_t(b)] = int(current.size());
                current.emplace_back(a, b);
                self(self, remaining - 1, a + 1);
                current.pop_back();
                pair_of[size_t(a)] = pair_of[size_t(b)] = -1;
            }
        }
    };
    rec(rec, loops, 0);
    return out;
}

namespace detail {

inline TaggedGraph tree_with_pairing(const TreeShape& shape,
                                     const std::vector<std::pair<int, int>>& pairing) {
    RawGraph raw;
    raw.shape = shape;
    int n = shape.leaf_count();
    raw.labels.assign(size_t(n), "");
    raw.pair_of.assign(size_t(n), -1);
    for (size_t p = 0; p < pairing.size(); ++p) {
        raw.pair_of[size_t(pairing[p].first)] = int(p);
        raw.pair_of[size_t(pairing[p].second)] = int(p);
    }
    int next = 1;
    for (size_t s = 0; s < raw.labels.size(); ++s)
        if (raw.pair_of[s] < 0) raw.labels[s] = std::to_string(next++);
    return TaggedGraph(std::move(raw));
}

}  // namespace detail

/// Loop-free trees of the given degree, leaves labeled 1..degree+1.
inline std::vector<TaggedGraph> family_Y(int degree) {
    charge_work(catalan(unsigned(std::max(degree, 0))));
    std::vector<TaggedGraph> out;
    for (auto& s : enumerate_shapes(degree)) out.push_back(canonical_tree(s));
    std::sort(out.begin(), out.end());
    return out;
}

/// Bracket expressions with n leaf slots: the empty element for n = 0,
/// otherwise the trees of degree n-1.
inline std::vector<TaggedGraph> family_X(int slots) {
    if (slots == 0) return {TaggedGraph::empty_graph()};
    return family_Y(slots - 1);
}

/// Everything reachable from the n-slot trees by nearest-neighbor
/// contractions: all balanced pairings with any number of loops.
inline std::vector<TaggedGraph> family_Xbar(int slots, int max_loops = -1) {
    if (slots == 0) return {TaggedGraph::empty_graph()};
    int cap = max_loops < 0 ? slots / 2 : std::min(max_loops, slots / 2);
    std::vector<TaggedGraph> out;
    for (auto& shape : enumerate_shapes(slots - 1))
        for (int g = 0; g <= cap; ++g)
            for (auto& pairing : balanced_pairings(slots, g))
                out.push_back(detail::tree_with_pairing(shape, pairing));
    charge_work(long(out.size()));
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Permutation bijection
// ---------------------------------------------------------------------------

using Permutation = std::vector<int>;  // image sequence (p(1) ... p(n)), values 1..n

/// Tree with leaves p1..pn+1 built by bracketing the interval carrying value 1
/// first, then value 2, and so on.
inline TaggedGraph tree_from_permutation(const Permutation& perm) {
    int n = int(perm.size());
    if (n == 0) throw GraphError("permutation must be nonempty");
    {
        std::vector<char> seen(size_t(n) + 1, 0);
        for (int v : perm) {
            if (v < 1 || v > n || seen[size_t(v)]) throw GraphError("not a permutation of 1..n");
            seen[size_t(v)] = 1;
        }
    }
    // units: current sequence of fused blocks, each a shape over original slots
    struct Unit {
        TreeShape shape;
        int first_slot;
    };
    std::vector<Unit> units;
    for (int s = 0; s <= n; ++s) units.push_back({TreeShape::leaf(), s});
    std::vector<int> interval_of_value(size_t(n) + 1, 0);
    for (int i = 0; i < n; ++i) interval_of_value[size_t(perm[size_t(i)])] = i;
    for (int value = 1; value <= n; ++value) {
        int interval = interval_of_value[size_t(value)];  // between original slots interval, interval+1
        // locate the adjacent units around that interval boundary
        size_t left = 0;
        for (size_t u = 0; u + 1 < units.size(); ++u) {
            int span_end = (u + 1 < units.size() ? units[u + 1].first_slot : n + 1);
            if (interval + 1 == span_end) {
                left = u;
                break;
            }
        }
        Unit merged{TreeShape::graft(units[left].shape, units[left + 1].shape),
                    units[left].first_slot};
        units[left] = merged;
        units.erase(units.begin() + long(left) + 1);
    }
    return canonical_tree(units[0].shape);
}

inline std::vector<Permutation> all_permutations(int n) {
    Permutation p(size_t(n), 0);
    std::iota(p.begin(), p.end(), 1);
    std::vector<Permutation> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

/// All permutations whose tree has the shape of t.
inline std::vector<Permutation> permutation_fiber(const TaggedGraph& t) {
    if (t.is_empty() || t.has_loops()) throw GraphError("fibers are defined for loop-free trees");
    int n = t.degree();
    if (n < 1) throw GraphError("fibers need degree >= 1");
    charge_work(factorial(unsigned(n)));
    std::vector<Permutation> out;
    for (auto& p : all_permutations(n))
        if (tree_from_permutation(p).shape() == t.shape()) out.push_back(p);
    return out;
}

// ---------------------------------------------------------------------------
// Graph families of the recursion expansion
// ---------------------------------------------------------------------------
//
// Structures generated exactly as the recursion unrolls: each trivalent vertex
// either splits into two sub-correlator attachments (left at the vertex
// variable, right at its conjugate) or carries a handle whose reattachment
// leaf sits as the right child. Structures whose loop pairing comes out
// non-planar are replaced by a mirror-equivalent planar representative, which
// leaves every evaluation under the weighted map unchanged.

namespace detail {

struct TermTree {
    // leaf iff left < 0; slot tags are assigned on flattening
    int left = -1, right = -1;
    int pair_id = -1;  // on leaves: loop pair membership, -1 for a free slot
};

struct TermSet {
    // Each term is an arena-encoded tree; arena is shared per generation run.
    std::vector<TermTree> arena;
    std::vector<int> roots;
    std::vector<int> free_counts;  // free slots per root
    int next_pair = 0;
};

class TermFamilyBuilder {
  public:
    // Structures for a correlator of genus g with k non-root marked slots.
    std::vector<int> generate(int g, int k) {
        auto key = std::make_pair(g, k);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        std::vector<int> out;
        if (g < 0 || k < 0) {
        } else if (g == 0 && k == 1) {
            out.push_back(add_leaf(-1));
        } else if (2 * g + k >= 2 && !(g == 0 && k <= 1)) {
            // products over genus and slot splits; factors pairing with the
            // vanishing one-point genus-zero correlator drop out
            for (int m = 0; m <= g; ++m) {
                for (int j = 0; j <= k; ++j) {
                    if ((m == 0 && j == 0) || (m == g && j == k)) continue;
                    auto ls = generate(m, j);
                    if (ls.empty()) continue;
                    auto rs = generate(g - m, k - j);
                    for (int l : ls)
                        for (int r : rs) out.push_back(add_vertex(l, r));
                }
            }
            // handles: one slot of the genus-lowered structure closes onto a
            // fresh right leaf; slots are addressed by occurrence since
            // memoized sub-structures may share arena nodes
            for (int h : generate(g - 1, k + 1)) {
                for (int occurrence = 0; occurrence < k + 1; ++occurrence) {
                    int pair = next_pair_++;
                    int counter = occurrence;
                    int closed = clone_with_pair_nth(h, counter, pair);
                    out.push_back(add_vertex(closed, add_leaf(pair)));
                }
            }
        }
        memo_.emplace(key, out);
        return out;
    }

    // Flatten a term into shape + pairing (labels left empty). Shared subtrees
    // are visited once per occurrence, so a generator pair id can show up 2m
    // times; consecutive occurrences two by two are one loop each (both ends
    // of a pair always sit inside the subtree that created it).
    RawGraph flatten(int root) const {
        RawGraph raw;
        std::vector<int> pair_ids;
        auto rec = [&](auto&& self, int n) -> void {
            if (arena_[size_t(n)].left < 0) {
                raw.shape.pre.push_back(0);
                pair_ids.push_back(arena_[size_t(n)].pair_id);
                return;
            }
            raw.shape.pre.push_back(1);
            self(self, arena_[size_t(n)].left);
            self(self, arena_[size_t(n)].right);
        };
        rec(rec, root);
        raw.labels.assign(pair_ids.size(), "");
        raw.pair_of.assign(pair_ids.size(), -1);
        std::map<int, std::vector<size_t>> ends;
        for (size_t s = 0; s < pair_ids.size(); ++s)
            if (pair_ids[s] >= 0) ends[pair_ids[s]].push_back(s);
        int next = 0;
        for (auto& [p, ss] : ends) {
            if (ss.size() % 2 != 0) throw GraphError("internal: odd loop end count");
            for (size_t i = 0; i + 1 < ss.size(); i += 2) {
                raw.pair_of[ss[i]] = next;
                raw.pair_of[ss[i + 1]] = next;
                ++next;
            }
        }
        return raw;
    }

  private:
    int add_leaf(int pair_id) {
        arena_.push_back({-1, -1, pair_id});
        return int(arena_.size()) - 1;
    }
    int add_vertex(int l, int r) {
        arena_.push_back({l, r, -1});
        return int(arena_.size()) - 1;
    }
    // Clone with the counter-th free leaf (preorder occurrence) closed by
    // `pair`; counter is decremented across the walk and ends at -1 once the
    // replacement happened.
    int clone_with_pair_nth(int n, int& counter, int pair) {
        if (counter < 0) return n;
        if (arena_[size_t(n)].left < 0) {
            if (arena_[size_t(n)].pair_id >= 0) return n;
            if (counter-- == 0) return add_leaf(pair);
            return n;
        }
        int l = clone_with_pair_nth(arena_[size_t(n)].left, counter, pair);
        int r = clone_with_pair_nth(arena_[size_t(n)].right, counter, pair);
        if (l == arena_[size_t(n)].left && r == arena_[size_t(n)].right) return n;
        return add_vertex(l, r);
    }

    std::vector<TermTree> arena_;
    std::map<std::pair<int, int>, std::vector<int>> memo_;
    int next_pair_ = 0;
};

}  // namespace detail

/// Graphs of the genus-g correlation family with k marked leaves, free leaves
/// labeled 1..k. Enumerated with the multiplicity of the recursion expansion;
/// entries are sorted canonically.
inline std::vector<TaggedGraph> family_Xg(int k, int g) {
    if (g < 0 || k < 0 || 2 * g + k < 2) return {};
    detail::TermFamilyBuilder builder;
    auto roots = builder.generate(g, k);
    charge_work(long(roots.size()) * (2 * g + k));
    std::vector<TaggedGraph> out;
    for (int r : roots) {
        RawGraph raw = builder.flatten(r);
        int next = 1;
        for (size_t s = 0; s < raw.labels.size(); ++s)
            if (raw.pair_of[s] < 0) raw.labels[s] = std::to_string(next++);
        out.push_back(TaggedGraph(std::move(raw), /*repair_by_mirror=*/true));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// The labeled family: every graph of family_Xg(k, g) with every assignment of
/// the k labels to its free leaves.
inline std::vector<TaggedGraph> family_EO(int k, int g,
                                          const std::vector<std::string>& labels = {}) {
    std::vector<std::string> names = labels;
    if (names.empty())
        for (int i = 1; i <= k; ++i) names.push_back("p" + std::to_string(i));
    if (int(names.size()) != k) throw GraphError("label count must match the family arity");
    auto base = family_Xg(k, g);
    charge_work(Integer(base.size()) * factorial(unsigned(k)));
    std::vector<TaggedGraph> out;
    std::vector<int> idx(size_t(k), 0);
    std::iota(idx.begin(), idx.end(), 0);
    for (auto& b : base) {
        auto free = b.free_slots();
        std::vector<int> perm = idx;
        do {
            RawGraph raw{b.shape(), b.labels(), b.pair_of()};
            for (size_t i = 0; i < free.size(); ++i)
                raw.labels[size_t(free[i])] = names[size_t(perm[i])];
            out.push_back(TaggedGraph(std::move(raw)));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct GraphFamilyId {
    enum class Kind { Y, X, Xbar, Xg, EO } kind;
    int n = 0;  // Y(n), X(n), Xbar(n)
    int k = 0, g = 0;
};

inline std::vector<TaggedGraph> enumerate_family(const GraphFamilyId& id) {
    switch (id.kind) {
        case GraphFamilyId::Kind::Y: return family_Y(id.n);
        case GraphFamilyId::Kind::X: return family_X(id.n);
        case GraphFamilyId::Kind::Xbar: return family_Xbar(id.n);
        case GraphFamilyId::Kind::Xg: return family_Xg(id.k, id.g);
        case GraphFamilyId::Kind::EO: return family_EO(id.k, id.g);
    }
    return {};
}

}  // namespace hopftr
