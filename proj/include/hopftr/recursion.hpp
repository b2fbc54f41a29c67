#pragma once

#include "hopftr/curve.hpp"
#include "hopftr/families.hpp"
#include "hopftr/laurent.hpp"
#include "hopftr/tagged_graph.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace hopftr {

/// Correlation-function coefficient relative to the product of dz_i of its
/// own variables (differentials stripped).
struct Correlator {
    int genus = 0;
    std::vector<std::string> vars;
    RatExpr value;
};

struct SignedVar {
    std::string name;
    int sign = 1;  // +1 or -1; -1 marks a conjugate-point slot z -> -z
};

namespace detail {

inline RatExpr signed_var_expr(const SignedVar& v) {
    Polynomial p = Polynomial::variable(v.name);
    return RatExpr(v.sign < 0 ? p.negated() : p);
}

// 1/(a - b)^2 on signed attachment points.
inline RatExpr bergmann_signed(const SignedVar& a, const SignedVar& b) {
    Polynomial pa = Polynomial::variable(a.name);
    if (a.sign < 0) pa = pa.negated();
    Polynomial pb = Polynomial::variable(b.name);
    if (b.sign < 0) pb = pb.negated();
    Polynomial diff = pa - pb;
    if (diff.is_zero()) throw std::invalid_argument("coincident propagator endpoints");
    return RatExpr(Polynomial::constant(1), diff * diff);
}

// K(z, p) depends on p only through p^2, so the sign of the second slot drops.
inline RatExpr kernel_signed(const CurveModel& c, const std::string& z, const SignedVar& p) {
    return recursion_kernel(c, z, p.name);
}

inline std::string canonical_var(int i) { return "z" + std::to_string(i); }

}  // namespace detail

/// Exact evaluator for the correlation functions of a one-branch-point curve:
/// the direct residue recursion, the per-graph weighted map, and the sum over
/// the graph family. Memoization is a pure cache over (genus, point count).
class Evaluator {
  public:
    explicit Evaluator(CurveModel curve) : curve_(std::move(curve)) {}

    const CurveModel& curve() const { return curve_; }

    /// W_n^(g) in canonical variables z0..z_{n-1}; z0 is the recursion slot.
    const RatExpr& w(int g, int n) {
        if (g < 0 || n < 1) return zero_;
        auto key = std::make_pair(g, n);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        RatExpr value = compute_w(g, n);
        return memo_.emplace(key, std::move(value)).first->second;
    }

    Correlator w_direct(int g, int n) {
        if (n < 1) throw std::invalid_argument("need at least one marked point");
        if (2 * g + n > 9) throw BoundError("w_direct limited to 2g+n <= 9");
        Correlator out;
        out.genus = g;
        for (int i = 0; i < n; ++i) out.vars.push_back(detail::canonical_var(i));
        out.value = w(g, n);
        return out;
    }

    /// Weighted-map value of one graph: kernels on skeleton edges, propagators
    /// on outlines and loops, residues taken from the deepest vertices upward.
    RatExpr phi_eval(const TaggedGraph& graph, const SignedVar& root,
                     const std::vector<SignedVar>& leaf_refs) {
        if (graph.is_empty()) throw GraphError("weighted map undefined on the empty graph");
        if (int(leaf_refs.size()) != int(graph.free_slots().size()))
            throw GraphError("leaf reference count mismatch");

        std::string memo_key = phi_key(graph, root, leaf_refs);
        auto found = phi_memo_.find(memo_key);
        if (found != phi_memo_.end()) return found->second;

        DecodedGraph d = decode(graph);
        int vcount = d.vertex_count();

        // Attachment point of each slot / vertex.
        auto vertex_var = [&](int v) { return "q" + std::to_string(v); };
        auto attach_of = [&](int parent_vertex, int side) -> SignedVar {
            if (parent_vertex < 0) return root;
            return SignedVar{vertex_var(parent_vertex), side == 0 ? 1 : -1};
        };

        std::vector<RatExpr> factors;
        for (int v = 0; v < vcount; ++v) {
            SignedVar at = attach_of(d.parent[size_t(v)],
                                     v == 0 ? 0 : child_side(d, d.parent[size_t(v)], v));
            factors.push_back(detail::kernel_signed(curve_, vertex_var(v), at));
        }
        auto slot_attach = [&](int s) -> SignedVar {
            return attach_of(d.slot_vertex[size_t(s)], d.slot_side[size_t(s)]);
        };
        auto free = graph.free_slots();
        for (size_t i = 0; i < free.size(); ++i)
            factors.push_back(detail::bergmann_signed(slot_attach(free[i]), leaf_refs[i]));
        for (auto& [a, b] : graph.pair_slots())
            factors.push_back(detail::bergmann_signed(slot_attach(a), slot_attach(b)));

        // Residues innermost-first: deepest vertices before their ancestors.
        std::vector<int> order(size_t(vcount), 0);
        for (int v = 0; v < vcount; ++v) order[size_t(v)] = v;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (d.depth[size_t(a)] != d.depth[size_t(b)]) return d.depth[size_t(a)] > d.depth[size_t(b)];
            return a < b;
        });
        for (int v : order) fold_residue(factors, vertex_var(v));

        RatExpr result = RatExpr::constant(1);
        for (auto& f : factors) result = result * f;
        phi_memo_.emplace(std::move(memo_key), result);
        return result;
    }

    /// Sum of the weighted map over the labeled graph family for (g, n).
    Correlator w_graph_sum(int g, int n) {
        if (n < 1 || 2 * g + n < 3) throw std::invalid_argument("need 2g+n >= 3 and n >= 1");
        if (2 * g + n > 9) throw BoundError("w_graph_sum limited to 2g+n <= 9");
        Correlator out;
        out.genus = g;
        for (int i = 0; i < n; ++i) out.vars.push_back(detail::canonical_var(i));
        std::vector<std::string> labels;
        for (int i = 1; i < n; ++i) labels.push_back(detail::canonical_var(i));
        RatExpr acc;
        for (auto& graph : family_EO(n - 1, g, labels)) {
            std::vector<SignedVar> refs;
            for (auto& l : graph.free_labels()) refs.push_back({l, 1});
            acc = acc + phi_eval(graph, {detail::canonical_var(0), 1}, refs);
        }
        out.value = acc;
        return out;
    }

    /// Substitute the canonical slots of a stored correlator by signed
    /// variables (simultaneous, sign on odd powers).
    static RatExpr substitute_slots(const RatExpr& value, const std::vector<SignedVar>& args) {
        std::map<std::string, std::pair<std::string, int>> renames;
        for (size_t i = 0; i < args.size(); ++i)
            renames[detail::canonical_var(int(i))] = {args[i].name, args[i].sign};
        return value.substitute_signed(renames);
    }

  private:
    static int child_side(const DecodedGraph& d, int parent, int v) {
        return (!d.children[size_t(parent)][0].is_slot &&
                d.children[size_t(parent)][0].index == v)
                   ? 0
                   : 1;
    }

    static std::string phi_key(const TaggedGraph& g, const SignedVar& root,
                               const std::vector<SignedVar>& refs) {
        std::string k = g.key();
        k += "@";
        k += root.sign < 0 ? "-" : "+";
        k += root.name;
        for (auto& r : refs) {
            k += r.sign < 0 ? ",-" : ",+";
            k += r.name;
        }
        return k;
    }

    // Multiply the factors containing `var`, take the residue at var = 0, and
    // put the result back as a single factor.
    static void fold_residue(std::vector<RatExpr>& factors, const std::string& var) {
        auto contains = [&](const RatExpr& e) {
            for (auto& [m, c] : e.num.terms)
                if (m.exponent_of(var) > 0) return true;
            for (auto& [m, c] : e.den.terms)
                if (m.exponent_of(var) > 0) return true;
            return false;
        };
        RatExpr inner = RatExpr::constant(1);
        std::vector<RatExpr> rest;
        for (auto& f : factors) {
            if (contains(f))
                inner = inner * f;
            else
                rest.push_back(f);
        }
        rest.push_back(residue_at_origin(inner, var));
        factors = std::move(rest);
    }

    RatExpr compute_w(int g, int n) {
        if (g == 0 && n == 1) return RatExpr::zero();
        if (g == 0 && n == 2)
            return bergmann(detail::canonical_var(0), detail::canonical_var(1));
        const std::string q = "q";
        RatExpr kern = detail::kernel_signed(curve_, q, {detail::canonical_var(0), 1});
        RatExpr acc;

        // Product terms over genus split and marked-point subsets.
        int k = n - 1;
        for (int m = 0; m <= g; ++m) {
            for (uint32_t mask = 0; mask < (uint32_t(1) << k); ++mask) {
                int j = __builtin_popcount(mask);
                // factors pairing with the vanishing 1-point genus-0 case
                if ((m == 0 && j == 0) || (m == g && j == k)) continue;
                const RatExpr& left = w(m, j + 1);
                if (left.is_zero()) continue;
                const RatExpr& right = w(g - m, n - j);
                if (right.is_zero()) continue;
                std::vector<SignedVar> largs{{q, 1}}, rargs{{q, -1}};
                for (int i = 0; i < k; ++i)
                    (mask >> i & 1 ? largs : rargs)
                        .push_back({detail::canonical_var(i + 1), 1});
                RatExpr term = kern * substitute_slots(left, largs) *
                               substitute_slots(right, rargs);
                acc = acc + residue_at_origin(term, q);
            }
        }

        // Genus-lowering term with both conjugate slots.
        const RatExpr& handle = w(g - 1, n + 1);
        if (!handle.is_zero()) {
            std::vector<SignedVar> hargs{{q, 1}, {q, -1}};
            for (int i = 1; i < n; ++i) hargs.push_back({detail::canonical_var(i), 1});
            acc = acc + residue_at_origin(kern * substitute_slots(handle, hargs), q);
        }
        return acc;
    }

    CurveModel curve_;
    std::map<std::pair<int, int>, RatExpr> memo_;
    std::map<std::string, RatExpr> phi_memo_;
    RatExpr zero_;
};

}  // namespace hopftr
