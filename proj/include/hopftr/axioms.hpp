#pragma once

#include "hopftr/families.hpp"
#include "hopftr/hopf.hpp"

#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace hopftr {

struct LawResult {
    std::string law;
    long checked = 0;
    long failures = 0;
    bool passed = true;
    std::string counterexample;           // first failing input(s)
    bool failures_involve_loops = true;   // every failure had a loop-bearing input
};

struct AxiomReport {
    int max_leaves = 0, max_loops = 0;
    std::vector<LawResult> laws;

    bool all_passed() const {
        for (auto& l : laws)
            if (!l.passed) return false;
        return true;
    }
    /// True when every failure is attributable to the straddling-loop
    /// collapse in the coproduct (i.e. involves a loop-bearing graph).
    bool failures_all_loop_attributable() const {
        for (auto& l : laws)
            if (!l.passed && !l.failures_involve_loops) return false;
        return true;
    }
};

namespace detail {

using Tensor3 = std::map<std::tuple<std::string, std::string, std::string>, Rational>;
using Tensor2 = std::map<std::pair<std::string, std::string>, Rational>;

inline void t3_add(Tensor3& t, const std::string& a, const std::string& b, const std::string& c,
                   const Rational& v) {
    if (v == 0) return;
    auto key = std::make_tuple(a, b, c);
    auto [it, fresh] = t.emplace(key, v);
    if (!fresh) {
        it->second += v;
        if (it->second == 0) t.erase(it);
    }
}

inline void t2_add(Tensor2& t, const std::string& a, const std::string& b, const Rational& v) {
    if (v == 0) return;
    auto key = std::make_pair(a, b);
    auto [it, fresh] = t.emplace(key, v);
    if (!fresh) {
        it->second += v;
        if (it->second == 0) t.erase(it);
    }
}

inline void record_failure(LawResult& law, const std::string& example, bool involves_loops) {
    ++law.failures;
    if (law.passed) {
        law.passed = false;
        law.counterexample = example;
        law.failures_involve_loops = true;
    }
    law.failures_involve_loops &= involves_loops;
}

}  // namespace detail

/// Exhaustive law checks over all basis graphs with at most max_leaves slots
/// and max_loops loop pairs: associativity and unit of the product,
/// coassociativity and counit of the coproduct, bialgebra compatibility,
/// counit multiplicativity and the antipode law. Failures report the first
/// counterexample and whether every failing case involves loops.
inline AxiomReport verify_axioms(int max_leaves, int max_loops) {
    if (max_leaves < 1 || max_leaves > 8) throw BoundError("axiom suite limited to 1..8 leaves");
    AxiomReport report;
    report.max_leaves = max_leaves;
    report.max_loops = max_loops;

    std::vector<std::vector<TaggedGraph>> basis(size_t(max_leaves) + 1);
    for (int n = 1; n <= max_leaves; ++n) basis[size_t(n)] = family_Xbar(n, max_loops);

    HopfCache ops;

    LawResult assoc{"star-associativity"};
    LawResult unit{"unit"};
    LawResult coassoc{"coassociativity"};
    LawResult counit_law{"counit"};
    LawResult compat{"product-coproduct-compatibility"};
    LawResult eps_mult{"counit-multiplicativity"};
    LawResult antipode_law{"antipode"};

    Combo unit_combo = Combo::of(TaggedGraph::empty_graph());

    // Unary laws.
    for (int n = 1; n <= max_leaves; ++n) {
        for (auto& x : basis[size_t(n)]) {
            Combo cx = Combo::of(x);
            bool loops = x.has_loops();

            const auto& dx = ops.split(x);
            {
                // (delta (x) id) delta == (id (x) delta) delta
                detail::Tensor3 left, right;
                for (auto& pr : dx) {
                    for (auto& t : ops.split(pr.left))
                        detail::t3_add(left, t.left.key(), t.right.key(), pr.right.key(), 1);
                    for (auto& t : ops.split(pr.right))
                        detail::t3_add(right, pr.left.key(), t.left.key(), t.right.key(), 1);
                }
                ++coassoc.checked;
                if (!(left == right)) detail::record_failure(coassoc, x.key(), loops);
            }
            {
                Combo lhs, rhs;
                for (auto& pr : dx) {
                    if (pr.left.is_empty()) lhs.add(pr.right, 1);   // eps on the left slot
                    if (pr.right.is_empty()) rhs.add(pr.left, 1);   // eps on the right slot
                }
                ++counit_law.checked;
                if (!(lhs == cx && rhs == cx)) detail::record_failure(counit_law, x.key(), loops);
            }
            {
                Combo acc;
                for (auto& t : dx)
                    acc = acc + ops.star(ops.antipode_basis(t.left), Combo::of(t.right));
                ++antipode_law.checked;
                if (!acc.is_zero())  // u(eps(x)) = 0 for x != empty
                    detail::record_failure(antipode_law, x.key(), loops);
            }
            {
                Combo l = ops.star(unit_combo, cx), r = ops.star(cx, unit_combo);
                ++unit.checked;
                if (!(l == cx && r == cx)) detail::record_failure(unit, x.key(), loops);
            }
        }
    }

    // Binary laws over pairs within the slot budget. The right operand's
    // integer labels are shifted up front so both sides of the compatibility
    // identity see one consistent labeling.
    for (int na = 1; na + 1 <= max_leaves; ++na) {
        for (int nb = 1; na + nb <= max_leaves; ++nb) {
            for (auto& a : basis[size_t(na)]) {
                for (auto& b : basis[size_t(nb)]) {
                    TaggedGraph bs = shift_integer_labels(b, na);
                    bool loops = a.has_loops() || b.has_loops();
                    Combo ca = Combo::of(a), cb = Combo::of(bs);
                    const Combo& prod = ops.star_basis(a, bs);
                    {
                        ++eps_mult.checked;
                        if (counit(prod) != counit(ca) * counit(cb))
                            detail::record_failure(eps_mult, a.key() + " , " + b.key(), loops);
                    }
                    {
                        detail::Tensor2 lhs, rhs;
                        for (auto& [t, c] : prod.terms)
                            for (auto& s : ops.split(t))
                                detail::t2_add(lhs, s.left.key(), s.right.key(), c);
                        for (auto& t1 : ops.split(a))
                            for (auto& t2 : ops.split(bs)) {
                                const Combo& gl = ops.star_basis(t1.left, t2.left);
                                const Combo& gr = ops.star_basis(t1.right, t2.right);
                                for (auto& [l, cl] : gl.terms)
                                    for (auto& [r, cr] : gr.terms)
                                        detail::t2_add(rhs, l.key(), r.key(), cl * cr);
                            }
                        ++compat.checked;
                        if (!(lhs == rhs))
                            detail::record_failure(compat, a.key() + " , " + b.key(), loops);
                    }
                }
            }
        }
    }

    // Associativity over triples.
    for (int na = 1; na + 2 <= max_leaves; ++na) {
        for (int nb = 1; na + nb + 1 <= max_leaves; ++nb) {
            for (int nc = 1; na + nb + nc <= max_leaves; ++nc) {
                for (auto& a : basis[size_t(na)])
                    for (auto& b : basis[size_t(nb)])
                        for (auto& c : basis[size_t(nc)]) {
                            bool loops = a.has_loops() || b.has_loops() || c.has_loops();
                            Combo cc = Combo::of(c);
                            Combo l = ops.star(ops.star_basis(a, b), cc);
                            Combo r = ops.star(Combo::of(a), ops.star_basis(b, c));
                            ++assoc.checked;
                            if (!(l == r))
                                detail::record_failure(
                                    assoc, a.key() + " , " + b.key() + " , " + c.key(), loops);
                        }
            }
        }
    }

    report.laws = {assoc, unit, coassoc, counit_law, compat, eps_mult, antipode_law};
    return report;
}

}  // namespace hopftr
