#pragma once

#include "hopftr/polynomial.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

namespace hopftr {

/// Rational expression num/den over Q in named variables, kept in a reduced
/// normal form: common monomial factors cancelled, exact quotients collapsed,
/// denominator monic under the graded order.
struct RatExpr {
    Polynomial num;
    Polynomial den = Polynomial::constant(1);

    RatExpr() : num(Polynomial::zero()) {}
    explicit RatExpr(Polynomial n) : num(std::move(n)) {}
    RatExpr(Polynomial n, Polynomial d) : num(std::move(n)), den(std::move(d)) { normalize(); }

    static RatExpr zero() { return RatExpr(); }
    static RatExpr constant(const Rational& c) { return RatExpr(Polynomial::constant(c)); }
    static RatExpr variable(const std::string& v, int exp = 1) {
        if (exp >= 0) return RatExpr(Polynomial::variable(v, exp));
        return RatExpr(Polynomial::constant(1), Polynomial::variable(v, -exp));
    }

    bool is_zero() const { return num.is_zero(); }

    bool is_constant() const { return num.is_constant() && den.is_constant(); }

    Rational constant_value() const { return num.constant_value() / den.constant_value(); }

    void normalize() {
        if (den.is_zero()) throw std::domain_error("division by zero rational expression");
        if (num.is_zero()) {
            den = Polynomial::constant(1);
            return;
        }
        Monomial g = num.monomial_content();
        Monomial h = den.monomial_content();
        Monomial common;
        {
            auto ia = g.factors.begin();
            for (auto& [v, e] : h.factors) {
                while (ia != g.factors.end() && ia->first < v) ++ia;
                if (ia != g.factors.end() && ia->first == v)
                    common.factors.emplace_back(v, std::min(e, ia->second));
            }
        }
        if (!common.is_one()) {
            Polynomial n2, d2;
            for (auto& [m, c] : num.terms) n2.terms[*m.divide(common)] = c;
            for (auto& [m, c] : den.terms) d2.terms[*m.divide(common)] = c;
            num = std::move(n2);
            den = std::move(d2);
        }
        if (!den.is_constant()) {
            if (auto q = num.divide_exact(den)) {
                num = std::move(*q);
                den = Polynomial::constant(1);
            }
        }
        Rational lead = den.leading().second;
        if (lead != 1) {
            num = num.scaled(1 / lead);
            den = den.scaled(1 / lead);
        }
    }

    friend RatExpr operator+(const RatExpr& a, const RatExpr& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den == b.den) return RatExpr(a.num + b.num, a.den);
        if (auto q = b.den.divide_exact(a.den))  // a.den | b.den
            return RatExpr(a.num * *q + b.num, b.den);
        if (auto q = a.den.divide_exact(b.den))
            return RatExpr(a.num + b.num * *q, a.den);
        return RatExpr(a.num * b.den + b.num * a.den, a.den * b.den);
    }

    friend RatExpr operator-(const RatExpr& a, const RatExpr& b) { return a + b.negated(); }

    RatExpr negated() const {
        RatExpr out = *this;
        out.num = out.num.negated();
        return out;
    }

    friend RatExpr operator*(const RatExpr& a, const RatExpr& b) {
        if (a.is_zero() || b.is_zero()) return RatExpr();
        return RatExpr(a.num * b.num, a.den * b.den);
    }

    friend RatExpr operator/(const RatExpr& a, const RatExpr& b) {
        if (b.is_zero()) throw std::domain_error("division by zero rational expression");
        if (a.is_zero()) return RatExpr();
        return RatExpr(a.num * b.den, a.den * b.num);
    }

    RatExpr scaled(const Rational& c) const {
        if (c == 0) return RatExpr();
        RatExpr out = *this;
        out.num = out.num.scaled(c);
        return out;
    }

    RatExpr inverse() const {
        if (is_zero()) throw std::domain_error("inverse of zero");
        return RatExpr(den, num);
    }

    friend bool operator==(const RatExpr& a, const RatExpr& b) {
        return (a.num * b.den) == (b.num * a.den);
    }

    RatExpr substitute_signed(
        const std::map<std::string, std::pair<std::string, int>>& renames) const {
        return RatExpr(num.substitute_signed(renames), den.substitute_signed(renames));
    }

    /// var -> -var.
    RatExpr substitute_negate(const std::string& var) const {
        return substitute_signed({{var, {var, -1}}});
    }

    std::string str() const {
        if (num.is_zero()) return "0";
        std::string n = num.str();
        if (den.is_constant() && den.constant_value() == 1) return n;
        std::string d = den.str();
        std::string ln = num.terms.size() > 1 ? "(" + n + ")" : n;
        std::string ld = den.terms.size() > 1 ? "(" + d + ")" : d;
        return ln + " / " + ld;
    }
};

}  // namespace hopftr
