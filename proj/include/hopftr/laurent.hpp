#pragma once

#include "hopftr/rat_expr.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace hopftr {

/// Finite window of a Laurent expansion around var = 0. Exponents are strictly
/// increasing, coefficients nonzero, and every exponent < truncation_order is
/// exact (absent means zero).
struct LocalSeries {
    std::string var;
    std::vector<std::pair<int, RatExpr>> coeffs;
    int truncation_order = 0;

    RatExpr coefficient(int exp) const {
        for (auto& [e, c] : coeffs)
            if (e == exp) return c;
        return RatExpr::zero();
    }

    int lowest_exponent() const { return coeffs.empty() ? truncation_order : coeffs.front().first; }
};

inline LocalSeries multiply(const LocalSeries& a, const LocalSeries& b) {
    if (a.var != b.var) throw std::invalid_argument("series variable mismatch");
    LocalSeries out;
    out.var = a.var;
    out.truncation_order =
        std::min(a.truncation_order + b.lowest_exponent(), b.truncation_order + a.lowest_exponent());
    std::map<int, RatExpr> acc;
    for (auto& [ea, ca] : a.coeffs)
        for (auto& [eb, cb] : b.coeffs) {
            int e = ea + eb;
            if (e >= out.truncation_order) continue;
            auto it = acc.find(e);
            if (it == acc.end())
                acc.emplace(e, ca * cb);
            else
                it->second = it->second + ca * cb;
        }
    for (auto& [e, c] : acc)
        if (!c.is_zero()) out.coeffs.emplace_back(e, c);
    return out;
}

/// Exact Laurent expansion of e around var = 0 through exponent order-1.
inline LocalSeries expand_local(const RatExpr& e, const std::string& var, int order) {
    LocalSeries out;
    out.var = var;
    out.truncation_order = order;
    if (e.is_zero()) return out;

    auto num_parts = e.num.coefficients_in(var);
    auto den_parts = e.den.coefficients_in(var);
    int mn = num_parts.begin()->first;
    int md = den_parts.begin()->first;
    const Polynomial& pivot = den_parts.begin()->second;  // nonzero at var = 0 once var^md is factored

    int lowest = mn - md;
    int needed = order - lowest;  // number of series coefficients to produce
    if (needed <= 0) return out;

    // Invert (pivot + d_{md+1} var + ...) as a power series.
    std::vector<RatExpr> inv(needed);
    RatExpr pivot_inv = RatExpr(Polynomial::constant(1), pivot);
    inv[0] = pivot_inv;
    for (int t = 1; t < needed; ++t) {
        RatExpr s;
        for (int u = 1; u <= t; ++u) {
            auto it = den_parts.find(md + u);
            if (it == den_parts.end()) continue;
            s = s + RatExpr(it->second) * inv[t - u];
        }
        inv[t] = s.negated() * pivot_inv;
    }

    for (int w = 0; w < needed; ++w) {
        RatExpr c;
        for (auto& [i, n] : num_parts) {
            int t = w - (i - mn);
            if (t < 0 || t >= needed) continue;
            c = c + RatExpr(n) * inv[t];
        }
        if (!c.is_zero()) out.coeffs.emplace_back(lowest + w, c);
    }
    return out;
}

/// Coefficient of var^-1; requires the window to cover it.
inline RatExpr residue_at_origin(const LocalSeries& s) {
    if (s.truncation_order < 0)
        throw std::invalid_argument("insufficient truncation for residue extraction");
    return s.coefficient(-1);
}

/// Order of the pole of e at var = 0 (0 when regular there).
inline int pole_order_at_origin(const RatExpr& e, const std::string& var) {
    if (e.is_zero()) return 0;
    int mn = e.num.min_degree_in(var);
    int md = e.den.min_degree_in(var);
    return std::max(0, md - mn);
}

/// Residue at var = 0 of a rational expression.
inline RatExpr residue_at_origin(const RatExpr& e, const std::string& var) {
    return residue_at_origin(expand_local(e, var, 0));
}

}  // namespace hopftr
