#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hopftr {

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    size_t position;
    ParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

/// Planar binary tree shape, encoded as preorder bits: 1 = trivalent vertex
/// (two children follow), 0 = leaf slot.
struct TreeShape {
    std::vector<uint8_t> pre;

    static TreeShape leaf() { return TreeShape{{0}}; }

    static TreeShape graft(const TreeShape& a, const TreeShape& b) {
        TreeShape t;
        t.pre.reserve(1 + a.pre.size() + b.pre.size());
        t.pre.push_back(1);
        t.pre.insert(t.pre.end(), a.pre.begin(), a.pre.end());
        t.pre.insert(t.pre.end(), b.pre.begin(), b.pre.end());
        return t;
    }

    bool is_leaf() const { return pre.size() == 1; }

    int degree() const { return int(pre.size() / 2); }

    int leaf_count() const { return int(pre.size() / 2 + 1); }

    // Children of the root vertex.
    std::pair<TreeShape, TreeShape> split() const {
        if (is_leaf()) throw GraphError("cannot split a bare leaf");
        size_t i = 1, need = 1;
        while (need > 0) {
            need += pre[i] ? 1 : -1;
            ++i;
        }
        TreeShape l, r;
        l.pre.assign(pre.begin() + 1, pre.begin() + i);
        r.pre.assign(pre.begin() + i, pre.end());
        return {l, r};
    }

    friend auto operator<=>(const TreeShape& a, const TreeShape& b) = default;
};

namespace detail {

// Mutable arena of plane binary trees used while rearranging graphs.
struct Arena {
    struct Node {
        int l = -1, r = -1;  // child node ids; leaf iff l < 0
        int tag = -1;        // payload on leaves (original slot id)
    };
    std::vector<Node> nodes;

    int add_leaf(int tag) {
        nodes.push_back({-1, -1, tag});
        return int(nodes.size()) - 1;
    }
    int add(int l, int r) {
        nodes.push_back({l, r, -1});
        return int(nodes.size()) - 1;
    }
    bool is_leaf(int n) const { return nodes[n].l < 0; }

    int build(const TreeShape& s, size_t& pos, int& next_slot) {
        if (s.pre[pos] == 0) {
            ++pos;
            return add_leaf(next_slot++);
        }
        ++pos;
        int l = build(s, pos, next_slot);
        int r = build(s, pos, next_slot);
        return add(l, r);
    }

    void slots_in_order(int n, std::vector<int>& out) const {
        if (is_leaf(n)) {
            out.push_back(nodes[n].tag);
            return;
        }
        slots_in_order(nodes[n].l, out);
        slots_in_order(nodes[n].r, out);
    }

    void shape_of(int n, std::vector<uint8_t>& out) const {
        if (is_leaf(n)) {
            out.push_back(0);
            return;
        }
        out.push_back(1);
        shape_of(nodes[n].l, out);
        shape_of(nodes[n].r, out);
    }

    void internal_nodes(int n, std::vector<int>& out) const {
        if (is_leaf(n)) return;
        out.push_back(n);
        internal_nodes(nodes[n].l, out);
        internal_nodes(nodes[n].r, out);
    }
};

}  // namespace detail

/// Pre-validation graph data: a shape plus per-slot labels and loop pairing.
/// pair_of[s] is -1 on free slots, otherwise a pair id shared by exactly two
/// slots. labels[s] is meaningful only on free slots.
struct RawGraph {
    TreeShape shape;
    std::vector<std::string> labels;
    std::vector<int> pair_of;
};

inline bool pairing_is_balanced(const std::vector<int>& pair_of) {
    int max_pair = -1;
    for (int p : pair_of) max_pair = std::max(max_pair, p);
    std::vector<char> opened(size_t(max_pair + 1), 0);
    std::vector<int> stack;
    for (int p : pair_of) {
        if (p < 0) {
            if (!stack.empty()) return false;  // free slot inside a loop interval
        } else if (!stack.empty() && stack.back() == p) {
            stack.pop_back();
        } else if (opened[size_t(p)]) {
            return false;  // crossing
        } else {
            opened[size_t(p)] = 1;
            stack.push_back(p);
        }
    }
    return stack.empty();
}

inline std::string render_raw(const RawGraph& g);

/// A tagged graph: planar binary tree shape whose leaf slots carry free labels
/// or form nearest-neighbor loop pairs; plus the distinguished empty element.
/// Immutable after construction; `key` is the canonical bracket rendering.
class TaggedGraph {
  public:
    TaggedGraph() : empty_(true), key_("0") {}

    static const TaggedGraph& empty_graph() {
        static const TaggedGraph e;
        return e;
    }

    static TaggedGraph leaf(const std::string& label) {
        RawGraph r{TreeShape::leaf(), {label}, {-1}};
        return TaggedGraph(std::move(r));
    }

    explicit TaggedGraph(RawGraph raw, bool repair_by_mirror = false) : empty_(false) {
        size_t n = raw.labels.size();
        if (raw.shape.leaf_count() != int(n) || raw.pair_of.size() != n)
            throw GraphError("slot data does not match shape");
        normalize_pairs(raw.pair_of);
        if (!pairing_is_balanced(raw.pair_of)) {
            if (!repair_by_mirror)
                throw GraphError("loop pairing is not realizable by nearest-neighbor contractions");
            raw = mirror_repair(raw);
        }
        check_pair_counts(raw.pair_of);
        shape_ = std::move(raw.shape);
        labels_ = std::move(raw.labels);
        pair_of_ = std::move(raw.pair_of);
        for (size_t s = 0; s < labels_.size(); ++s)
            if (pair_of_[s] >= 0) labels_[s].clear();
        check_distinct_labels();
        key_ = render_raw(RawGraph{shape_, labels_, pair_of_});
    }

    bool is_empty() const { return empty_; }
    const TreeShape& shape() const { return require(), shape_; }
    const std::vector<std::string>& labels() const { return require(), labels_; }
    const std::vector<int>& pair_of() const { return require(), pair_of_; }
    const std::string& key() const { return key_; }

    int slot_count() const { return empty_ ? 0 : int(labels_.size()); }
    int degree() const { return empty_ ? 0 : shape_.degree(); }

    int loop_count() const {
        if (empty_) return 0;
        int m = 0;
        for (int p : pair_of_) m = std::max(m, p + 1);
        return m;
    }

    std::vector<int> free_slots() const {
        std::vector<int> out;
        if (empty_) return out;
        for (size_t s = 0; s < pair_of_.size(); ++s)
            if (pair_of_[s] < 0) out.push_back(int(s));
        return out;
    }

    std::vector<std::string> free_labels() const {
        std::vector<std::string> out;
        for (int s : free_slots()) out.push_back(labels_[size_t(s)]);
        return out;
    }

    // Slot index pair per loop, ordered by pair id (= by first slot).
    std::vector<std::pair<int, int>> pair_slots() const {
        std::vector<std::pair<int, int>> out(size_t(loop_count()), {-1, -1});
        for (size_t s = 0; s < pair_of_.size(); ++s) {
            int p = pair_of_[s];
            if (p < 0) continue;
            auto& pr = out[size_t(p)];
            (pr.first < 0 ? pr.first : pr.second) = int(s);
        }
        return out;
    }

    bool has_loops() const { return loop_count() > 0; }

    friend bool operator==(const TaggedGraph& a, const TaggedGraph& b) { return a.key_ == b.key_; }
    friend bool operator<(const TaggedGraph& a, const TaggedGraph& b) { return a.key_ < b.key_; }

  private:
    void require() const {
        if (empty_) throw GraphError("operation undefined on the empty graph");
    }

    static void normalize_pairs(std::vector<int>& pair_of) {
        std::map<int, int> renumber;
        for (int& p : pair_of) {
            if (p < 0) continue;
            auto [it, fresh] = renumber.emplace(p, int(renumber.size()));
            p = it->second;
        }
    }

    static void check_pair_counts(const std::vector<int>& pair_of) {
        std::map<int, int> count;
        for (int p : pair_of)
            if (p >= 0) ++count[p];
        for (auto& [p, c] : count)
            if (c != 2) throw GraphError("loop pair id must occur in exactly two slots");
    }

    void check_distinct_labels() const {
        std::set<std::string> seen;
        for (size_t s = 0; s < labels_.size(); ++s) {
            if (pair_of_[s] >= 0) continue;
            if (labels_[s].empty()) throw GraphError("free slot without a label");
            if (!seen.insert(labels_[s]).second)
                throw GraphError("duplicate free label '" + labels_[s] + "'");
        }
    }

    static RawGraph mirror_repair(const RawGraph& raw);

    bool empty_;
    TreeShape shape_;
    std::vector<std::string> labels_;
    std::vector<int> pair_of_;
    std::string key_;
};

inline std::string render_raw(const RawGraph& g) {
    std::vector<std::string> slot_text(g.labels.size());
    for (size_t s = 0; s < g.labels.size(); ++s)
        slot_text[s] = g.pair_of[s] >= 0 ? std::to_string(s + 1) : g.labels[s];
    std::ostringstream os;
    size_t pos = 0;
    size_t slot = 0;
    auto rec = [&](auto&& self) -> void {
        if (g.shape.pre[pos] == 0) {
            ++pos;
            os << slot_text[slot++];
            return;
        }
        ++pos;
        os << "<";
        self(self);
        os << " ";
        self(self);
        os << ">";
    };
    rec(rec);
    std::vector<std::pair<int, int>> pairs;
    {
        std::map<int, std::pair<int, int>> by_id;
        for (size_t s = 0; s < g.pair_of.size(); ++s) {
            int p = g.pair_of[s];
            if (p < 0) continue;
            auto [it, fresh] = by_id.emplace(p, std::make_pair(int(s), -1));
            if (!fresh) it->second.second = int(s);
        }
        for (auto& [p, pr] : by_id) pairs.push_back(pr);
        std::sort(pairs.begin(), pairs.end());
    }
    if (!pairs.empty()) {
        os << " | ";
        for (size_t i = 0; i < pairs.size(); ++i) {
            if (i) os << ",";
            os << pairs[i].first + 1 << "~" << pairs[i].second + 1;
        }
    }
    return os.str();
}

inline std::string render_graph(const TaggedGraph& g) { return g.key(); }

namespace detail {

// Calls fn on every child-order variant of raw (2^vertices of them).
template <typename Fn>
inline void for_each_mirror_variant(const RawGraph& raw, Fn&& fn) {
    Arena arena;
    size_t pos = 0;
    int next = 0;
    int root = arena.build(raw.shape, pos, next);
    std::vector<int> internals;
    arena.internal_nodes(root, internals);
    size_t k = internals.size();
    if (k > 20) throw GraphError("graph too large for mirror enumeration");
    for (uint64_t mask = 0; mask < (uint64_t(1) << k); ++mask) {
        Arena var = arena;
        for (size_t i = 0; i < k; ++i)
            if (mask >> i & 1)
                std::swap(var.nodes[size_t(internals[i])].l, var.nodes[size_t(internals[i])].r);
        std::vector<int> order;
        var.slots_in_order(root, order);
        RawGraph cand;
        var.shape_of(root, cand.shape.pre);
        cand.labels.resize(order.size());
        cand.pair_of.resize(order.size());
        for (size_t s = 0; s < order.size(); ++s) {
            cand.labels[s] = raw.labels[size_t(order[s])];
            cand.pair_of[s] = raw.pair_of[size_t(order[s])];
        }
        fn(std::move(cand));
    }
}

}  // namespace detail

/// Lexicographically smallest rendering over all child-order variants: the
/// key of the mirror-equivalence class (on which the weighted map is constant).
inline std::string mirror_orbit_key(const RawGraph& raw) {
    std::string best;
    detail::for_each_mirror_variant(raw, [&](RawGraph cand) {
        std::map<int, int> renumber;
        for (int& p : cand.pair_of) {
            if (p < 0) continue;
            auto [it, fresh] = renumber.emplace(p, int(renumber.size()));
            p = it->second;
        }
        std::string key = render_raw(cand);
        if (best.empty() || key < best) best = std::move(key);
    });
    return best;
}

inline RawGraph TaggedGraph::mirror_repair(const RawGraph& raw) {
    std::optional<RawGraph> best;
    std::string best_key;
    detail::for_each_mirror_variant(raw, [&](RawGraph cand) {
        normalize_pairs(cand.pair_of);
        if (!pairing_is_balanced(cand.pair_of)) return;
        std::string key = render_raw(cand);
        if (!best || key < best_key) {
            best = std::move(cand);
            best_key = key;
        }
    });
    if (!best) throw GraphError("loop pairing admits no planar nearest-neighbor form");
    return *best;
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

inline TaggedGraph parse_graph(const std::string& text) {
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n')) ++i;
    };
    auto is_ident = [](char c) {
        return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
               c == '_';
    };
    auto ident = [&]() -> std::string {
        size_t start = i;
        while (i < text.size() && is_ident(text[i])) ++i;
        if (i == start) throw ParseError("expected identifier", start);
        return text.substr(start, i - start);
    };

    RawGraph raw;
    auto node = [&](auto&& self) -> TreeShape {
        skip_ws();
        if (i >= text.size()) throw ParseError("unexpected end of input", i);
        if (text[i] == '<') {
            ++i;
            TreeShape l = self(self);
            skip_ws();
            if (i < text.size() && text[i] == '>') {  // "<1>": apex angle around a lone leaf
                ++i;
                return l;
            }
            TreeShape r = self(self);
            skip_ws();
            if (i >= text.size() || text[i] != '>') throw ParseError("expected '>'", i);
            ++i;
            return TreeShape::graft(l, r);
        }
        raw.labels.push_back(ident());
        raw.pair_of.push_back(-1);
        return TreeShape::leaf();
    };

    skip_ws();
    if (i >= text.size()) throw ParseError("empty input", 0);
    if (text[i] == '0') {
        size_t j = i + 1;
        while (j < text.size() && (text[j] == ' ' || text[j] == '\t' || text[j] == '\n')) ++j;
        if (j == text.size()) return TaggedGraph::empty_graph();
    }
    raw.shape = node(node);
    skip_ws();
    if (i < text.size() && text[i] == '|') {
        ++i;
        int next_pair = 0;
        while (true) {
            skip_ws();
            size_t at = i;
            std::string a = ident();
            skip_ws();
            if (i >= text.size() || text[i] != '~') throw ParseError("expected '~'", i);
            ++i;
            skip_ws();
            size_t bt = i;
            std::string b = ident();
            int sa, sb;
            try {
                sa = std::stoi(a);
                sb = std::stoi(b);
            } catch (const std::exception&) {
                throw ParseError("loop pair positions must be integers", at);
            }
            int n = int(raw.labels.size());
            if (sa < 1 || sa > n || sb < 1 || sb > n || sa == sb)
                throw ParseError("loop pair position out of range", bt);
            if (raw.pair_of[size_t(sa - 1)] >= 0 || raw.pair_of[size_t(sb - 1)] >= 0)
                throw ParseError("slot already belongs to a loop pair", at);
            raw.pair_of[size_t(sa - 1)] = next_pair;
            raw.pair_of[size_t(sb - 1)] = next_pair;
            ++next_pair;
            skip_ws();
            if (i < text.size() && text[i] == ',') {
                ++i;
                continue;
            }
            break;
        }
    }
    skip_ws();
    if (i != text.size()) throw ParseError("trailing input", i);
    return TaggedGraph(std::move(raw));
}

// ---------------------------------------------------------------------------
// Structural operations
// ---------------------------------------------------------------------------

inline TaggedGraph graft(const TaggedGraph& a, const TaggedGraph& b) {
    if (a.is_empty() || b.is_empty()) throw GraphError("graft rejects the empty graph");
    RawGraph raw;
    raw.shape = TreeShape::graft(a.shape(), b.shape());
    raw.labels = a.labels();
    raw.labels.insert(raw.labels.end(), b.labels().begin(), b.labels().end());
    raw.pair_of = a.pair_of();
    int offset = a.loop_count();
    for (int p : b.pair_of()) raw.pair_of.push_back(p < 0 ? -1 : p + offset);
    return TaggedGraph(std::move(raw));
}

inline bool labels_are_canonical(const TaggedGraph& g) {
    auto fl = g.free_labels();
    for (size_t i = 0; i < fl.size(); ++i)
        if (fl[i] != std::to_string(i + 1)) return false;
    return true;
}

/// Joins the pos-th and (pos+1)-th free leaves (1-based) into a new loop pair.
inline TaggedGraph contract(const TaggedGraph& g, int pos) {
    if (g.is_empty()) throw GraphError("cannot contract the empty graph");
    auto free = g.free_slots();
    if (int(free.size()) < 2) throw GraphError("fewer than two free leaves");
    if (pos < 1 || pos + 1 > int(free.size()))
        throw GraphError("contraction position out of range");
    bool canonical = labels_are_canonical(g);
    RawGraph raw{g.shape(), g.labels(), g.pair_of()};
    int id = g.loop_count();
    raw.pair_of[size_t(free[size_t(pos - 1)])] = id;
    raw.pair_of[size_t(free[size_t(pos)])] = id;
    if (canonical) {
        int next = 1;
        for (size_t s = 0; s < raw.labels.size(); ++s)
            if (raw.pair_of[s] < 0) raw.labels[s] = std::to_string(next++);
    }
    return TaggedGraph(std::move(raw));
}

/// Tree spanned by the selected free labels, inner degree-2 vertices smoothed.
inline TaggedGraph induced_subgraph(const TaggedGraph& g, const std::set<std::string>& keep) {
    if (g.is_empty()) {
        if (!keep.empty()) throw GraphError("unknown label");
        return TaggedGraph::empty_graph();
    }
    if (g.has_loops()) throw GraphError("induced subgraphs are defined on loop-free graphs");
    {
        std::set<std::string> have;
        for (auto& l : g.free_labels()) have.insert(l);
        for (auto& l : keep)
            if (!have.count(l)) throw GraphError("unknown label '" + l + "'");
    }
    struct Piece {
        TreeShape shape;
        std::vector<std::string> labels;
    };
    size_t pos = 0;
    size_t slot = 0;
    auto rec = [&](auto&& self) -> std::optional<Piece> {
        if (g.shape().pre[pos] == 0) {
            ++pos;
            const std::string& lab = g.labels()[slot++];
            if (!keep.count(lab)) return std::nullopt;
            return Piece{TreeShape::leaf(), {lab}};
        }
        ++pos;
        auto l = self(self);
        auto r = self(self);
        if (!l) return r;
        if (!r) return l;
        Piece p;
        p.shape = TreeShape::graft(l->shape, r->shape);
        p.labels = std::move(l->labels);
        p.labels.insert(p.labels.end(), r->labels.begin(), r->labels.end());
        return p;
    };
    auto piece = rec(rec);
    if (!piece) return TaggedGraph::empty_graph();
    RawGraph raw{piece->shape, piece->labels, std::vector<int>(piece->labels.size(), -1)};
    return TaggedGraph(std::move(raw));
}

/// Loop slots replaced by reserved virtual labels "~0", "~1", ...
inline TaggedGraph underlying_tree_virtual(const TaggedGraph& g) {
    if (g.is_empty() || !g.has_loops()) return g;
    RawGraph raw{g.shape(), g.labels(), std::vector<int>(g.labels().size(), -1)};
    std::map<int, int> seen;  // pair id -> ends seen; labels on the two ends must differ
    for (size_t s = 0; s < raw.labels.size(); ++s) {
        int p = g.pair_of()[s];
        if (p < 0) continue;
        int which = seen[p]++;
        raw.labels[s] = "~" + std::to_string(p) + (which ? "b" : "a");
    }
    return TaggedGraph(std::move(raw));
}

/// Pairs up the given slots of a loop-free graph (labels on them are dropped).
inline TaggedGraph with_pairs_at_slots(const TaggedGraph& g,
                                       const std::vector<std::pair<int, int>>& slot_pairs,
                                       bool repair_by_mirror = false) {
    RawGraph raw{g.shape(), g.labels(), g.pair_of()};
    int id = g.loop_count();
    for (auto& [a, b] : slot_pairs) {
        raw.pair_of[size_t(a)] = id;
        raw.pair_of[size_t(b)] = id;
        ++id;
    }
    return TaggedGraph(std::move(raw), repair_by_mirror);
}

inline TaggedGraph relabel_canonical(const TaggedGraph& g) {
    if (g.is_empty()) return g;
    RawGraph raw{g.shape(), g.labels(), g.pair_of()};
    int next = 1;
    for (size_t s = 0; s < raw.labels.size(); ++s)
        if (raw.pair_of[s] < 0) raw.labels[s] = std::to_string(next++);
    return TaggedGraph(std::move(raw));
}

inline bool labels_are_integers(const TaggedGraph& g) {
    for (auto& l : g.free_labels()) {
        if (l.empty()) return false;
        for (char c : l)
            if (c < '0' || c > '9') return false;
    }
    return true;
}

inline TaggedGraph shift_integer_labels(const TaggedGraph& g, long offset) {
    RawGraph raw{g.shape(), g.labels(), g.pair_of()};
    for (size_t s = 0; s < raw.labels.size(); ++s) {
        if (raw.pair_of[s] >= 0) continue;
        raw.labels[s] = std::to_string(std::stol(raw.labels[s]) + offset);
    }
    return TaggedGraph(std::move(raw));
}

/// Shape with leaves labeled 1..n+1.
inline TaggedGraph canonical_tree(const TreeShape& shape) {
    RawGraph raw;
    raw.shape = shape;
    int n = shape.leaf_count();
    for (int s = 0; s < n; ++s) {
        raw.labels.push_back(std::to_string(s + 1));
        raw.pair_of.push_back(-1);
    }
    return TaggedGraph(std::move(raw));
}

// ---------------------------------------------------------------------------
// Decoded view for traversals
// ---------------------------------------------------------------------------

struct DecodedGraph {
    struct Child {
        bool is_slot;
        int index;  // slot id or vertex id
    };
    std::vector<std::array<Child, 2>> children;  // per vertex, preorder ids
    std::vector<int> parent;                     // per vertex, -1 at root vertex
    std::vector<int> depth;                      // per vertex
    std::vector<int> slot_vertex;                // owning vertex per slot (-1 if no vertex at all)
    std::vector<int> slot_side;                  // 0 = left child, 1 = right child

    int vertex_count() const { return int(children.size()); }
};

inline DecodedGraph decode(const TaggedGraph& g) {
    DecodedGraph d;
    if (g.is_empty()) return d;
    int n = g.slot_count();
    d.slot_vertex.assign(size_t(n), -1);
    d.slot_side.assign(size_t(n), 0);
    size_t pos = 0;
    int slot = 0;
    auto rec = [&](auto&& self, int parent, int depth, int side) -> DecodedGraph::Child {
        if (g.shape().pre[pos] == 0) {
            ++pos;
            int s = slot++;
            d.slot_vertex[size_t(s)] = parent;
            d.slot_side[size_t(s)] = side;
            return {true, s};
        }
        ++pos;
        int v = int(d.children.size());
        d.children.push_back({});
        d.parent.push_back(parent);
        d.depth.push_back(depth);
        auto l = self(self, v, depth + 1, 0);
        auto r = self(self, v, depth + 1, 1);
        d.children[size_t(v)] = {l, r};
        return {false, v};
    };
    rec(rec, -1, 0, 0);
    return d;
}

}  // namespace hopftr
