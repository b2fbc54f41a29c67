#pragma once

#include "hopftr/combo.hpp"
#include "hopftr/tagged_graph.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hopftr {

// ---------------------------------------------------------------------------
// Labeled-tree helpers
// ---------------------------------------------------------------------------

namespace detail {

inline std::pair<TaggedGraph, TaggedGraph> split_tree(const TaggedGraph& g) {
    auto [ls, rs] = g.shape().split();
    int nl = ls.leaf_count();
    RawGraph l{ls, {}, {}}, r{rs, {}, {}};
    for (int s = 0; s < nl; ++s) {
        l.labels.push_back(g.labels()[size_t(s)]);
        l.pair_of.push_back(-1);
    }
    for (size_t s = size_t(nl); s < g.labels().size(); ++s) {
        r.labels.push_back(g.labels()[s]);
        r.pair_of.push_back(-1);
    }
    return {TaggedGraph(std::move(l)), TaggedGraph(std::move(r))};
}

// Loop slots replaced by virtual labels carrying `prefix`.
inline TaggedGraph virtualize(const TaggedGraph& g, const std::string& prefix) {
    RawGraph raw{g.shape(), g.labels(), std::vector<int>(g.labels().size(), -1)};
    std::map<int, int> seen;
    for (size_t s = 0; s < raw.labels.size(); ++s) {
        int p = g.pair_of()[s];
        if (p < 0) continue;
        int which = seen[p]++;
        raw.labels[s] = prefix + std::to_string(p) + (which ? "b" : "a");
    }
    return TaggedGraph(std::move(raw));
}

// Pairs up the slots carrying the given label pairs (labels must be present).
inline TaggedGraph pair_by_labels(const TaggedGraph& tree,
                                  const std::vector<std::pair<std::string, std::string>>& pairs,
                                  bool repair = false) {
    std::vector<std::pair<int, int>> slot_pairs;
    for (auto& [a, b] : pairs) {
        int sa = -1, sb = -1;
        for (size_t s = 0; s < tree.labels().size(); ++s) {
            if (tree.labels()[s] == a) sa = int(s);
            if (tree.labels()[s] == b) sb = int(s);
        }
        if (sa < 0 || sb < 0) throw GraphError("virtual loop label missing");
        slot_pairs.emplace_back(sa, sb);
    }
    return with_pairs_at_slots(tree, slot_pairs, repair);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Product (leaf-preserving, vertex-increasing)
// ---------------------------------------------------------------------------

namespace detail {

inline Combo star_trees(const TaggedGraph& a, const TaggedGraph& b,
                        std::map<std::string, Combo>* memo = nullptr) {
    std::string key;
    if (memo) {
        key = a.key() + "*" + b.key();
        auto it = memo->find(key);
        if (it != memo->end()) return it->second;
    }
    Combo out = Combo::of(graft(a, b));
    if (!b.shape().is_leaf()) {
        auto [b1, b2] = split_tree(b);
        for (auto& [t, c] : star_trees(a, b1, memo).terms) out.add(graft(t, b2), c);
    }
    if (!a.shape().is_leaf()) {
        auto [a1, a2] = split_tree(a);
        for (auto& [t, c] : star_trees(a2, b, memo).terms) out.add(graft(a1, t), c);
    }
    if (memo) memo->emplace(std::move(key), out);
    return out;
}

}  // namespace detail

/// Basis product: grafting sum on the underlying trees, operand loop pairs
/// reapplied to their slots afterwards. When integer-labeled operands share
/// labels, the right operand's labels are shifted by the left one's leaf count.
inline Combo star_basis(const TaggedGraph& a, const TaggedGraph& b,
                        std::map<std::string, Combo>* tree_memo = nullptr) {
    if (a.is_empty()) return Combo::of(b);
    if (b.is_empty()) return Combo::of(a);

    TaggedGraph bb = b;
    {
        auto la = a.free_labels();
        std::set<std::string> sa(la.begin(), la.end());
        bool collide = false;
        for (auto& l : b.free_labels())
            if (sa.count(l)) collide = true;
        if (collide) {
            if (!labels_are_integers(a) || !labels_are_integers(b))
                throw GraphError("label collision after shift");
            // On canonically labeled operands this is the usual shift by the
            // left leaf count; the max keeps sparse label sets disjoint too.
            long offset = 0;
            for (auto& l : a.free_labels()) offset = std::max(offset, std::stol(l));
            bb = shift_integer_labels(b, offset);
            for (auto& l : bb.free_labels())
                if (sa.count(l)) throw GraphError("label collision after shift");
        }
    }

    TaggedGraph ta = detail::virtualize(a, "~L");
    TaggedGraph tb = detail::virtualize(bb, "~R");
    std::vector<std::pair<std::string, std::string>> vpairs;
    for (int p = 0; p < a.loop_count(); ++p)
        vpairs.emplace_back("~L" + std::to_string(p) + "a", "~L" + std::to_string(p) + "b");
    for (int p = 0; p < bb.loop_count(); ++p)
        vpairs.emplace_back("~R" + std::to_string(p) + "a", "~R" + std::to_string(p) + "b");

    Combo out;
    for (auto& [t, c] : detail::star_trees(ta, tb, tree_memo).terms)
        out.add(detail::pair_by_labels(t, vpairs), c);
    return out;
}

inline Combo star(const Combo& x, const Combo& y) {
    Combo out;
    for (auto& [gx, cx] : x.terms)
        for (auto& [gy, cy] : y.terms)
            for (auto& [g, c] : star_basis(gx, gy).terms) out.add(g, c * cx * cy);
    return out;
}


// ---------------------------------------------------------------------------
// Coproduct (leaf-splitting, vertex-decreasing)
// ---------------------------------------------------------------------------

struct CoproductTerm {
    TaggedGraph left, right;
    int straddle_count = 0;  // loop pairs glued across the split
    int stub_slot = -1;      // slot of the reattachment stub in `left`
};

namespace detail {

struct LabeledTree {
    Arena arena;
    int root = -1;
    std::vector<std::string> leaf_labels;  // indexed by leaf tag

    static LabeledTree of(const TaggedGraph& tree) {
        LabeledTree t;
        size_t pos = 0;
        int next = 0;
        t.root = t.arena.build(tree.shape(), pos, next);
        t.leaf_labels = tree.labels();
        return t;
    }

    int find_leaf(const std::string& label) const {
        for (size_t n = 0; n < arena.nodes.size(); ++n)
            if (arena.is_leaf(int(n)) && leaf_labels[size_t(arena.nodes[n].tag)] == label)
                return int(n);
        return -1;
    }

    TaggedGraph to_graph() const {
        std::vector<int> order;
        arena.slots_in_order(root, order);
        RawGraph raw;
        arena.shape_of(root, raw.shape.pre);
        for (int tag : order) {
            raw.labels.push_back(leaf_labels[size_t(tag)]);
            raw.pair_of.push_back(-1);
        }
        return TaggedGraph(std::move(raw));
    }
};

// Tree hung from one of its leaves: the old root edge becomes a fresh leaf
// (the reattachment stub). Child order follows the counterclockwise reading
// at each vertex (parent, right, left).
inline int reroot_at_leaf(LabeledTree& t, int leaf_node, int stub_tag) {
    auto& a = t.arena;
    std::vector<int> parent(a.nodes.size(), -1);
    std::vector<int> pending{t.root};
    while (!pending.empty()) {
        int n = pending.back();
        pending.pop_back();
        if (a.is_leaf(n)) continue;
        parent[size_t(a.nodes[size_t(n)].l)] = n;
        parent[size_t(a.nodes[size_t(n)].r)] = n;
        pending.push_back(a.nodes[size_t(n)].l);
        pending.push_back(a.nodes[size_t(n)].r);
    }
    // rebuild(n, from): the subtree seen at vertex n when entering from `from`.
    auto rebuild = [&](auto&& self, int n, int from) -> int {
        if (n < 0) return a.add_leaf(stub_tag);
        int up = parent[size_t(n)];
        int l = a.nodes[size_t(n)].l, r = a.nodes[size_t(n)].r;
        if (from == l) return a.add(self(self, up, n), r);
        return a.add(l, self(self, up, n));
    };
    return rebuild(rebuild, parent[size_t(leaf_node)], leaf_node);
}

// Replace the leaf `at` of `host` by subtree root `sub` (same arena).
inline int plant(Arena& a, int host_root, int at, int sub) {
    if (host_root == at) return sub;
    if (a.is_leaf(host_root)) return host_root;
    int l = plant(a, a.nodes[size_t(host_root)].l, at, sub);
    int r = plant(a, a.nodes[size_t(host_root)].r, at, sub);
    if (l == a.nodes[size_t(host_root)].l && r == a.nodes[size_t(host_root)].r) return host_root;
    return a.add(l, r);
}

inline std::string smallest_unused_integer_label(const std::set<std::string>& used) {
    for (long k = 1;; ++k) {
        std::string cand = std::to_string(k);
        if (!used.count(cand)) return cand;
    }
}

}  // namespace detail

/// All splitting terms of one basis graph. Loop-free graphs split over label
/// subsets. On loop-bearing graphs the split runs over the underlying tree
/// with loop slots as virtual labels; pairs falling into one factor become
/// loops there, and a pair straddling the split pulls the whole right factor
/// into the left one along the pair, leaving the right factor empty.
inline std::vector<CoproductTerm> coproduct_basis_terms(const TaggedGraph& g) {
    std::vector<CoproductTerm> out;
    if (g.is_empty()) {
        out.push_back({g, g, 0, -1});
        return out;
    }

    TaggedGraph tree = g.has_loops() ? detail::virtualize(g, "~") : g;
    auto pair_slots = g.pair_slots();
    const auto& all_labels = tree.labels();
    int n = int(all_labels.size());

    for (uint64_t mask = 0; mask < (uint64_t(1) << n); ++mask) {
        std::set<std::string> in, outl;
        for (int s = 0; s < n; ++s)
            (mask >> s & 1 ? in : outl).insert(all_labels[size_t(s)]);
        TaggedGraph left_tree = induced_subgraph(tree, in);
        TaggedGraph right_tree = induced_subgraph(tree, outl);

        if (!g.has_loops()) {
            out.push_back({left_tree, right_tree, 0, -1});
            continue;
        }

        std::vector<std::pair<std::string, std::string>> left_pairs, right_pairs;
        // Straddling pairs as (label on the left side, label on the right side).
        std::vector<std::pair<std::string, std::string>> straddle;
        for (size_t p = 0; p < pair_slots.size(); ++p) {
            auto [s1, s2] = pair_slots[p];
            bool in1 = mask >> s1 & 1, in2 = mask >> s2 & 1;
            const std::string &l1 = all_labels[size_t(s1)], &l2 = all_labels[size_t(s2)];
            if (in1 && in2)
                left_pairs.emplace_back(l1, l2);
            else if (!in1 && !in2)
                right_pairs.emplace_back(l1, l2);
            else if (in1)
                straddle.emplace_back(l1, l2);
            else
                straddle.emplace_back(l2, l1);
        }

        if (straddle.empty()) {
            TaggedGraph l =
                left_tree.is_empty() ? left_tree : detail::pair_by_labels(left_tree, left_pairs);
            TaggedGraph r =
                right_tree.is_empty() ? right_tree : detail::pair_by_labels(right_tree, right_pairs);
            out.push_back({l, r, 0, -1});
            continue;
        }

        // Glue: fuse the right factor into the left one along the straddling
        // pair whose left end sits leftmost; other straddling pairs close up
        // as loops of the fused graph.
        detail::LabeledTree L = detail::LabeledTree::of(left_tree);
        detail::LabeledTree R = detail::LabeledTree::of(right_tree);
        size_t fuse = 0;
        {
            auto pos_of = [&](const std::string& lab) {
                for (size_t s = 0; s < left_tree.labels().size(); ++s)
                    if (left_tree.labels()[s] == lab) return int(s);
                return -1;
            };
            for (size_t i = 1; i < straddle.size(); ++i)
                if (pos_of(straddle[i].first) < pos_of(straddle[fuse].first)) fuse = i;
        }

        // Merge R's arena into L's.
        int node_offset = int(L.arena.nodes.size());
        int tag_offset = int(L.leaf_labels.size());
        for (auto nd : R.arena.nodes) {
            if (nd.l >= 0) {
                nd.l += node_offset;
                nd.r += node_offset;
            } else {
                nd.tag += tag_offset;
            }
            L.arena.nodes.push_back(nd);
        }
        L.leaf_labels.insert(L.leaf_labels.end(), R.leaf_labels.begin(), R.leaf_labels.end());
        int r_root = R.root + node_offset;

        int stub_tag = int(L.leaf_labels.size());
        L.leaf_labels.push_back("~stub");
        int v_leaf = L.find_leaf(straddle[fuse].second);
        detail::LabeledTree merged = L;  // arena shared; rebuild below
        int sub;
        if (merged.arena.is_leaf(r_root) && r_root == v_leaf) {
            sub = merged.arena.add_leaf(stub_tag);  // bare-edge right factor
        } else {
            merged.root = r_root;
            sub = detail::reroot_at_leaf(merged, v_leaf, stub_tag);
        }
        int u_leaf = merged.find_leaf(straddle[fuse].first);
        merged.root = detail::plant(merged.arena, L.root, u_leaf, sub);

        std::vector<std::pair<std::string, std::string>> fused_pairs = left_pairs;
        fused_pairs.insert(fused_pairs.end(), right_pairs.begin(), right_pairs.end());
        for (size_t i = 0; i < straddle.size(); ++i)
            if (i != fuse) fused_pairs.push_back(straddle[i]);

        TaggedGraph fused_tree = merged.to_graph();
        TaggedGraph fused = detail::pair_by_labels(fused_tree, fused_pairs, /*repair=*/true);

        // Canonical label for the stub: smallest unused positive integer.
        int stub_slot = -1;
        for (size_t s = 0; s < fused.labels().size(); ++s)
            if (fused.pair_of()[s] < 0 && fused.labels()[s] == "~stub") stub_slot = int(s);
        std::set<std::string> used;
        for (auto& l : fused.free_labels())
            if (l != "~stub") used.insert(l);
        RawGraph raw{fused.shape(), fused.labels(), fused.pair_of()};
        raw.labels[size_t(stub_slot)] = detail::smallest_unused_integer_label(used);
        out.push_back({TaggedGraph(std::move(raw)), TaggedGraph::empty_graph(),
                       int(straddle.size()), stub_slot});
    }
    return out;
}

inline TensorCombo coproduct(const Combo& x) {
    TensorCombo out;
    for (auto& [g, c] : x.terms)
        for (auto& t : coproduct_basis_terms(g)) out.add(t.left, t.right, c);
    return out;
}

inline TensorCombo reduced_coproduct(const Combo& x) {
    TensorCombo out = coproduct(x);
    for (auto& [g, c] : x.terms) {
        out.add(TaggedGraph::empty_graph(), g, -c);
        out.add(g, TaggedGraph::empty_graph(), -c);
    }
    return out;
}

inline Rational counit(const Combo& x) {
    auto it = x.terms.find(TaggedGraph::empty_graph());
    return it == x.terms.end() ? Rational(0) : it->second;
}

// ---------------------------------------------------------------------------
// Antipode
// ---------------------------------------------------------------------------

/// Memo shared across heavy exhaustive computations (axiom suite, antipode
/// recursion). Behaves as a pure cache.
class HopfCache {
  public:
    const std::vector<CoproductTerm>& split(const TaggedGraph& g);
    const Combo& star_basis(const TaggedGraph& a, const TaggedGraph& b);
    Combo star(const Combo& x, const Combo& y);
    const Combo& antipode_basis(const TaggedGraph& g);

  private:
    std::map<std::string, std::vector<CoproductTerm>> split_;
    std::map<std::string, Combo> star_pairs_;
    std::map<std::string, Combo> star_trees_;
    std::map<std::string, Combo> antipode_;
};

inline const std::vector<CoproductTerm>& HopfCache::split(const TaggedGraph& g) {
    auto it = split_.find(g.key());
    if (it != split_.end()) return it->second;
    return split_.emplace(g.key(), coproduct_basis_terms(g)).first->second;
}

inline const Combo& HopfCache::star_basis(const TaggedGraph& a, const TaggedGraph& b) {
    std::string key = a.key() + "|" + b.key();
    auto it = star_pairs_.find(key);
    if (it != star_pairs_.end()) return it->second;
    return star_pairs_.emplace(std::move(key), hopftr::star_basis(a, b, &star_trees_))
        .first->second;
}

inline Combo HopfCache::star(const Combo& x, const Combo& y) {
    Combo out;
    for (auto& [gx, cx] : x.terms)
        for (auto& [gy, cy] : y.terms)
            for (auto& [g, c] : star_basis(gx, gy).terms) out.add(g, c * cx * cy);
    return out;
}

/// Antipode of a basis graph. Loop-free graphs use the Sweedler recursion of
/// a graded connected bialgebra; loop-bearing graphs are defined through
/// commutation with contraction (antipode of the underlying tree, then the
/// same slot positions paired in every term).
inline const Combo& HopfCache::antipode_basis(const TaggedGraph& g) {
    auto found = antipode_.find(g.key());
    if (found != antipode_.end()) return found->second;
    Combo acc;
    if (g.is_empty()) {
        acc = Combo::of(g);
    } else if (g.has_loops()) {
        TaggedGraph tree = detail::virtualize(g, "~");
        auto slot_pairs = g.pair_slots();
        for (auto& [t, c] : antipode_basis(tree).terms)
            acc.add(with_pairs_at_slots(t, slot_pairs), c);
    } else {
        acc = Combo::of(g, -1);
        for (auto& term : split(g)) {
            if (term.left.is_empty() || term.right.is_empty()) continue;  // reduced part only
            acc = acc - star(antipode_basis(term.left), Combo::of(term.right));
        }
    }
    return antipode_.emplace(g.key(), std::move(acc)).first->second;
}

inline Combo antipode(const Combo& x) {
    HopfCache cache;
    Combo out;
    for (auto& [g, c] : x.terms)
        for (auto& [t, k] : cache.antipode_basis(g).terms) out.add(t, k * c);
    return out;
}

/// Contraction of the pos-th pair of adjacent free leaves, termwise.
inline Combo contract(const Combo& x, int pos) {
    Combo out;
    for (auto& [g, c] : x.terms) out.add(contract(g, pos), c);
    return out;
}

// ---------------------------------------------------------------------------
// Loday-Ronco operations on shapes
// ---------------------------------------------------------------------------

using ShapeCombo = std::map<TreeShape, Rational>;

namespace detail {

inline void shape_add(ShapeCombo& x, const TreeShape& t, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = x.emplace(t, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) x.erase(it);
    }
}

inline ShapeCombo lr_product_shape(const TreeShape& a, const TreeShape& b) {
    if (a.is_leaf()) return {{b, 1}};
    if (b.is_leaf()) return {{a, 1}};
    auto [a1, a2] = a.split();
    auto [b1, b2] = b.split();
    ShapeCombo out;
    for (auto& [t, c] : lr_product_shape(a2, b)) shape_add(out, TreeShape::graft(a1, t), c);
    for (auto& [t, c] : lr_product_shape(a, b1)) shape_add(out, TreeShape::graft(t, b2), c);
    return out;
}

using ShapeTensor = std::map<std::pair<TreeShape, TreeShape>, Rational>;

inline void shape_tensor_add(ShapeTensor& x, const TreeShape& l, const TreeShape& r,
                             const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = x.emplace(std::make_pair(l, r), c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) x.erase(it);
    }
}

inline ShapeTensor lr_coproduct_shape(const TreeShape& t) {
    ShapeTensor out;
    if (t.is_leaf()) {
        shape_tensor_add(out, t, t, 1);
        return out;
    }
    auto [t1, t2] = t.split();
    auto d1 = lr_coproduct_shape(t1);
    auto d2 = lr_coproduct_shape(t2);
    for (auto& [k1, c1] : d1)
        for (auto& [k2, c2] : d2)
            for (auto& [prod, cp] : lr_product_shape(k1.first, k2.first))
                shape_tensor_add(out, prod, TreeShape::graft(k1.second, k2.second), c1 * c2 * cp);
    shape_tensor_add(out, t, TreeShape::leaf(), 1);
    return out;
}

inline TreeShape shape_of_loop_free(const TaggedGraph& g, const char* op) {
    if (g.is_empty() || g.has_loops())
        throw GraphError(std::string(op) + " requires loop-free nonempty operands");
    return g.shape();
}

}  // namespace detail

inline Combo lr_product(const Combo& x, const Combo& y) {
    Combo out;
    for (auto& [gx, cx] : x.terms) {
        TreeShape a = detail::shape_of_loop_free(gx, "lr_product");
        for (auto& [gy, cy] : y.terms) {
            TreeShape b = detail::shape_of_loop_free(gy, "lr_product");
            for (auto& [t, c] : detail::lr_product_shape(a, b))
                out.add(canonical_tree(t), c * cx * cy);
        }
    }
    return out;
}

inline TensorCombo lr_coproduct(const Combo& x) {
    TensorCombo out;
    for (auto& [g, c] : x.terms) {
        TreeShape t = detail::shape_of_loop_free(g, "lr_coproduct");
        for (auto& [k, ck] : detail::lr_coproduct_shape(t))
            out.add(canonical_tree(k.first), canonical_tree(k.second), c * ck);
    }
    return out;
}

}  // namespace hopftr
