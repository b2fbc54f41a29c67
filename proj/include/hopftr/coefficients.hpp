#pragma once

#include "hopftr/families.hpp"
#include "hopftr/hopf.hpp"
#include "hopftr/recursion.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hopftr {

/// s_1 = 1, s_m = 2(3m-4) s_{m-1} + sum_{n=1}^{m-1} s_n s_{m-n}.
inline Integer s_sequence(int m) {
    if (m < 1) throw std::invalid_argument("s_sequence needs m >= 1");
    std::vector<Integer> s(size_t(m) + 1);
    s[1] = 1;
    for (int t = 2; t <= m; ++t) {
        Integer v = Integer(2 * (3 * t - 4)) * s[size_t(t - 1)];
        for (int n = 1; n <= t - 1; ++n) v += s[size_t(n)] * s[size_t(t - n)];
        s[size_t(t)] = v;
    }
    return s[size_t(m)];
}

enum class CoeffMode { FormulaStatement, FormulaProof, BruteForced };

inline std::string to_string(CoeffMode m) {
    switch (m) {
        case CoeffMode::FormulaStatement: return "formula-statement";
        case CoeffMode::FormulaProof: return "formula-proof";
        case CoeffMode::BruteForced: return "brute-forced";
    }
    return "";
}

namespace detail {

inline Integer catalan_safe(int n) { return n < 0 ? Integer(0) : catalan(unsigned(n)); }

// s_0 enters the closed form only through vanishing-genus factors; the empty
// product convention s_0 = 1 keeps those classes meaningful.
inline Integer s_safe(int m) { return m == 0 ? Integer(1) : s_sequence(m); }

}  // namespace detail

/// Closed-form splitting coefficient for genus 0: draw i of the k labels to
/// the near side. The statement and in-proof variants disagree by one Catalan
/// index; the brute-forced ratio is the arbiter.
inline Rational a_formula_genus0(int k, int i, CoeffMode mode) {
    Integer ci = mode == CoeffMode::FormulaProof ? detail::catalan_safe(i - 1)
                                                 : detail::catalan_safe(i);
    Rational num(ci * detail::catalan_safe(k - i - 1));
    Rational den(detail::catalan_safe(k - 1) * binomial_int(unsigned(k), unsigned(i)));
    if (den == 0) throw std::invalid_argument("coefficient undefined for these indices");
    return num / den;
}

/// Closed-form class coefficient at genus g (same value in both written
/// variants; half-integer binomials are taken in the falling-factorial sense).
inline Rational a_formula_genus_g(int g, int k, int m, int i, CoeffMode) {
    Rational top_l = Rational(3 * (m - 1), 2) + i;
    Rational top_r = Rational(3 * (g - m - 1), 2) + (k - i);
    Rational num = Rational(detail::s_safe(m)) * Rational(detail::s_safe(g - m)) *
                   binomial_general(top_l, unsigned(i)) * binomial_general(top_r, unsigned(k - i));
    Rational den = Rational(detail::s_safe(g)) *
                   Rational(binomial_int(unsigned(k), unsigned(i))) *
                   Rational(binomial_int(unsigned(g), unsigned(m))) *
                   binomial_general(Rational(3 * (g - 1), 2) + k, unsigned(k));
    if (den == 0) throw std::invalid_argument("coefficient undefined for these indices");
    return num / den;
}

/// Handle-class coefficient: g/(2^k (4^g - 2^g)) as stated, 1/(2^k (4^g - 2^g))
/// per the in-proof count.
inline Rational b_formula(int g, int k, CoeffMode mode) {
    if (g < 1) throw std::invalid_argument("handle coefficient needs g >= 1");
    Integer p2 = 1, p4 = 1;
    for (int i = 0; i < g; ++i) p2 *= 2, p4 *= 4;
    Integer two_k = 1;
    for (int i = 0; i < k; ++i) two_k *= 2;
    Integer den = two_k * (p4 - p2);
    return Rational(mode == CoeffMode::FormulaStatement ? Integer(g) : Integer(1), den);
}

// ---------------------------------------------------------------------------
// Brute-force counting and the identity check
// ---------------------------------------------------------------------------

/// Number of structures in the recursion expansion of the (g, k)-family; the
/// bare two-point propagator counts as one.
inline Integer structure_count(int g, int k) {
    if (g == 0 && k == 1) return 1;
    if (g < 0 || k < 0 || 2 * g + k < 2) return 0;
    detail::TermFamilyBuilder b;
    return Integer(b.generate(g, k).size());
}

inline Integer labeled_structure_count(int g, int k) {
    return structure_count(g, k) * factorial(unsigned(std::max(k, 0)));
}

struct CoeffEntry {
    // Splitting class: left factor of genus m with i marked leaves. The handle
    // class (reattachment terms) is flagged separately.
    bool handle = false;
    int m = 0, i = 0;
    Rational value;
    std::string provenance;
    Integer recursion_count = 0, tensor_count = 0;  // brute mode only
    bool integral_reciprocal = true;
};

struct CoeffTable {
    int g = 0, k = 0;
    CoeffMode mode = CoeffMode::BruteForced;
    std::vector<CoeffEntry> entries;

    const CoeffEntry* find(int m, int i) const {
        for (auto& e : entries)
            if (!e.handle && e.m == m && e.i == i) return &e;
        return nullptr;
    }
    const CoeffEntry* handle_entry() const {
        for (auto& e : entries)
            if (e.handle) return &e;
        return nullptr;
    }
};

namespace detail {

struct ClassifiedTerms {
    // (m, i) -> list of (left, right) graphs, with multiplicity
    std::map<std::pair<int, int>, std::vector<std::pair<TaggedGraph, TaggedGraph>>> split;
    // handle class: glued left graph + its stub slot
    std::vector<std::pair<TaggedGraph, int>> handle;
};

inline ClassifiedTerms classify_family_coproduct(int g, int k,
                                                 const std::vector<std::string>& labels) {
    ClassifiedTerms out;
    for (auto& G : family_EO(k, g, labels)) {
        for (auto& t : coproduct_basis_terms(G)) {
            if (t.left.is_empty()) continue;  // the (empty (x) G) term of delta
            if (t.right.is_empty() && t.straddle_count == 0) continue;  // (G (x) empty)
            if (t.right.is_empty()) {
                out.handle.emplace_back(t.left, t.stub_slot);
            } else {
                int i = int(t.left.free_slots().size());
                int m = t.left.loop_count();
                out.split[{m, i}].emplace_back(t.left, t.right);
            }
        }
    }
    return out;
}

}  // namespace detail

/// Coefficient table for the (g, k) splitting identity. Brute-forced entries
/// are the ratio (recursion-side term count) / (tensor term count) per class;
/// their reciprocals are checked for integrality.
inline CoeffTable coeff_table(int g, int k, CoeffMode mode) {
    if (g < 0 || k < 0 || 2 * g + k < 2 || 2 * g + k > 8)
        throw BoundError("coefficient table limited to 2 <= 2g+k <= 8");
    CoeffTable table;
    table.g = g;
    table.k = k;
    table.mode = mode;

    if (mode != CoeffMode::BruteForced) {
        for (int m = 0; m <= g; ++m)
            for (int i = 0; i <= k; ++i) {
                if ((m == 0 && i == 0) || (m == g && i == k)) continue;
                CoeffEntry e;
                e.m = m;
                e.i = i;
                e.value = g == 0 ? a_formula_genus0(k, i, mode)
                                 : a_formula_genus_g(g, k, m, i, mode);
                e.provenance = to_string(mode);
                table.entries.push_back(e);
            }
        if (g >= 1) {
            CoeffEntry e;
            e.handle = true;
            e.value = b_formula(g, k, mode);
            e.provenance = to_string(mode);
            table.entries.push_back(e);
        }
        return table;
    }

    std::vector<std::string> labels;
    for (int i = 1; i <= k; ++i) labels.push_back("z" + std::to_string(i));
    auto classified = detail::classify_family_coproduct(g, k, labels);
    for (auto& [cls, terms] : classified.split) {
        auto [m, i] = cls;
        CoeffEntry e;
        e.m = m;
        e.i = i;
        e.tensor_count = Integer(terms.size());
        e.recursion_count = binomial_int(unsigned(k), unsigned(i)) *
                            labeled_structure_count(m, i) *
                            labeled_structure_count(g - m, k - i);
        e.provenance = to_string(mode);
        if (e.tensor_count == 0 || e.recursion_count == 0) {
            e.value = 0;
            e.integral_reciprocal = false;
        } else {
            e.value = Rational(e.recursion_count, e.tensor_count);
            e.integral_reciprocal = e.tensor_count % e.recursion_count == 0;
        }
        table.entries.push_back(e);
    }
    if (g >= 1) {
        CoeffEntry e;
        e.handle = true;
        e.tensor_count = Integer(classified.handle.size());
        e.recursion_count = labeled_structure_count(g - 1, k + 1);
        e.provenance = to_string(mode);
        if (e.tensor_count == 0 || e.recursion_count == 0) {
            e.value = 0;
            e.integral_reciprocal = false;
        } else {
            e.value = Rational(e.recursion_count, e.tensor_count);
            e.integral_reciprocal = e.tensor_count % e.recursion_count == 0;
        }
        table.entries.push_back(e);
    }
    return table;
}

struct VerifyClassReport {
    bool handle = false;
    int m = 0, i = 0;
    std::string orbit;  // mirror-orbit key for refined handle subclasses
    Integer recursion_count, tensor_count;
    Rational coefficient;
    bool integral_reciprocal = true;
};

struct CoproductIdentityReport {
    int g = 0, k = 0;
    bool equal = false;
    RatExpr lhs, rhs;
    std::vector<VerifyClassReport> classes;
    bool all_reciprocals_integral = true;
    // The single-coefficient handle class as written: defined only when the
    // glued terms and the genus-lowered structures populate mirror orbits
    // proportionally; otherwise the refined per-orbit weights above apply and
    // the written constant has no consistent value.
    bool handle_present = false;
    bool single_handle_coefficient_exists = false;
    Rational single_handle_ratio;  // coarse count ratio, for comparison
};

namespace detail {

// Orbit key of a graph with one slot distinguished (the reattachment stub or
// the conjugate-labeled slot of a genus-lowered structure).
inline std::string marked_orbit_key(const TaggedGraph& g, int marked_slot) {
    RawGraph raw{g.shape(), g.labels(), g.pair_of()};
    if (marked_slot >= 0) raw.labels[size_t(marked_slot)] = "~mark";
    return mirror_orbit_key(raw);
}

}  // namespace detail

/// Splits the family coproduct by class, reassembles the correlator through
/// the weighted map with the brute-forced coefficients, and compares against
/// the direct recursion. Splitting classes carry one ratio per (m, i); the
/// reattachment (handle) terms need one ratio per mirror orbit of the glued
/// graph — the data shows a single constant exists only for small (g, k), and
/// the report records whether it does.
inline CoproductIdentityReport verify_coproduct_identity(const CurveModel& curve, int g, int k) {
    if (g < 0 || k < 0 || 2 * g + k < 2 || 2 * g + k > 7)
        throw BoundError("identity check limited to 2 <= 2g+k <= 7");
    CoproductIdentityReport report;
    report.g = g;
    report.k = k;

    std::vector<std::string> labels;
    for (int i = 1; i <= k; ++i) labels.push_back("z" + std::to_string(i));
    auto classified = detail::classify_family_coproduct(g, k, labels);
    CoeffTable table = coeff_table(g, k, CoeffMode::BruteForced);

    Evaluator ev(curve);
    const std::string q = "q";
    RatExpr kern = recursion_kernel(curve, q, "z0");

    RatExpr lhs;
    for (auto& [cls, terms] : classified.split) {
        auto [m, i] = cls;
        const CoeffEntry* e = table.find(m, i);
        VerifyClassReport cr;
        cr.m = m;
        cr.i = i;
        cr.recursion_count = e->recursion_count;
        cr.tensor_count = e->tensor_count;
        cr.coefficient = e->value;
        cr.integral_reciprocal = e->integral_reciprocal;
        report.classes.push_back(cr);
        report.all_reciprocals_integral &= e->integral_reciprocal;

        RatExpr class_sum;
        for (auto& [left, right] : terms) {
            std::vector<SignedVar> lrefs, rrefs;
            for (auto& l : left.free_labels()) lrefs.push_back({l, 1});
            for (auto& l : right.free_labels()) rrefs.push_back({l, 1});
            RatExpr prod = kern * ev.phi_eval(left, {q, 1}, lrefs) *
                           ev.phi_eval(right, {q, -1}, rrefs);
            class_sum = class_sum + residue_at_origin(prod, q);
        }
        lhs = lhs + class_sum.scaled(e->value);
    }

    if (!classified.handle.empty()) {
        report.handle_present = true;
        if (const CoeffEntry* coarse = table.handle_entry())
            report.single_handle_ratio = coarse->value;

        // Tensor terms per glued-graph orbit.
        std::map<std::string, std::vector<std::pair<TaggedGraph, int>>> tag_orbits;
        for (auto& [glued, stub_slot] : classified.handle)
            tag_orbits[detail::marked_orbit_key(glued, stub_slot)].emplace_back(glued, stub_slot);

        // Genus-lowered structures per orbit, conjugate slot marked.
        std::map<std::string, Integer> rec_orbits;
        {
            std::vector<std::string> hlabels{"~conj"};
            for (auto& l : labels) hlabels.push_back(l);
            for (auto& H : family_EO(k + 1, g - 1, hlabels)) {
                int marked = -1;
                auto free = H.free_slots();
                for (int s : free)
                    if (H.labels()[size_t(s)] == "~conj") marked = s;
                RawGraph raw{H.shape(), H.labels(), H.pair_of()};
                raw.labels[size_t(marked)] = "~mark";
                ++rec_orbits[mirror_orbit_key(raw)];
            }
        }

        bool uniform = true;
        std::optional<Rational> common;
        for (auto& [orbit, terms] : tag_orbits) {
            auto rit = rec_orbits.find(orbit);
            Integer rec = rit == rec_orbits.end() ? Integer(0) : rit->second;
            VerifyClassReport cr;
            cr.handle = true;
            cr.orbit = orbit;
            cr.recursion_count = rec;
            cr.tensor_count = Integer(terms.size());
            cr.coefficient = rec == 0 ? Rational(0) : Rational(rec, Integer(terms.size()));
            cr.integral_reciprocal = rec != 0 && Integer(terms.size()) % rec == 0;
            report.all_reciprocals_integral &= cr.integral_reciprocal;
            if (!common)
                common = cr.coefficient;
            else if (*common != cr.coefficient)
                uniform = false;
            report.classes.push_back(cr);

            RatExpr orbit_sum;
            for (auto& [glued, stub_slot] : terms) {
                std::vector<SignedVar> refs;
                auto free = glued.free_slots();
                for (size_t s = 0; s < free.size(); ++s) {
                    if (free[s] == stub_slot)
                        refs.push_back({q, -1});  // reattachment slot = conjugate point
                    else
                        refs.push_back({glued.labels()[size_t(free[s])], 1});
                }
                orbit_sum = orbit_sum + residue_at_origin(kern * ev.phi_eval(glued, {q, 1}, refs), q);
            }
            lhs = lhs + orbit_sum.scaled(cr.coefficient);
        }
        // Every genus-lowered orbit must be covered by glued terms.
        for (auto& [orbit, rec] : rec_orbits)
            if (!tag_orbits.count(orbit)) report.all_reciprocals_integral = false;
        report.single_handle_coefficient_exists = uniform;
    }

    report.lhs = lhs;
    report.rhs = ev.w(g, k + 1);
    report.equal = report.lhs == report.rhs;
    return report;
}

}  // namespace hopftr
