#pragma once

#include "hopftr/rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace hopftr {

/// Power product over named variables, exponents > 0, factors sorted by name.
struct Monomial {
    std::vector<std::pair<std::string, int>> factors;

    int total_degree() const {
        int d = 0;
        for (auto& [v, e] : factors) d += e;
        return d;
    }

    int exponent_of(const std::string& var) const {
        for (auto& [v, e] : factors)
            if (v == var) return e;
        return 0;
    }

    bool is_one() const { return factors.empty(); }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.factors == b.factors; }

    // Graded order, ties broken lexicographically on the factor sequence.
    friend bool operator<(const Monomial& a, const Monomial& b) {
        int da = a.total_degree(), db = b.total_degree();
        if (da != db) return da < db;
        return a.factors < b.factors;
    }

    static Monomial one() { return {}; }

    static Monomial variable(const std::string& var, int exp = 1) {
        Monomial m;
        if (exp != 0) m.factors.emplace_back(var, exp);
        return m;
    }

    Monomial times(const Monomial& other) const {
        Monomial out;
        auto ia = factors.begin(), ib = other.factors.begin();
        while (ia != factors.end() || ib != other.factors.end()) {
            if (ib == other.factors.end() || (ia != factors.end() && ia->first < ib->first)) {
                out.factors.push_back(*ia++);
            } else if (ia == factors.end() || ib->first < ia->first) {
                out.factors.push_back(*ib++);
            } else {
                int e = ia->second + ib->second;
                if (e != 0) out.factors.emplace_back(ia->first, e);
                ++ia, ++ib;
            }
        }
        return out;
    }

    // Componentwise quotient; nullopt when not divisible.
    std::optional<Monomial> divide(const Monomial& other) const {
        Monomial out;
        auto ia = factors.begin();
        for (auto& [v, e] : other.factors) {
            while (ia != factors.end() && ia->first < v) out.factors.push_back(*ia++);
            if (ia == factors.end() || ia->first != v || ia->second < e) return std::nullopt;
            if (ia->second > e) out.factors.emplace_back(v, ia->second - e);
            ++ia;
        }
        while (ia != factors.end()) out.factors.push_back(*ia++);
        return out;
    }
};

/// Sparse multivariate polynomial over Q in expanded normal form.
struct Polynomial {
    std::map<Monomial, Rational> terms;  // zero coefficients never stored

    static Polynomial zero() { return {}; }

    static Polynomial constant(const Rational& c) {
        Polynomial p;
        if (c != 0) p.terms[Monomial::one()] = c;
        return p;
    }

    static Polynomial variable(const std::string& var, int exp = 1) {
        Polynomial p;
        p.terms[Monomial::variable(var, exp)] = 1;
        return p;
    }

    bool is_zero() const { return terms.empty(); }

    bool is_constant() const {
        return terms.empty() || (terms.size() == 1 && terms.begin()->first.is_one());
    }

    Rational constant_value() const {
        if (terms.empty()) return 0;
        auto it = terms.find(Monomial::one());
        return it == terms.end() ? Rational(0) : it->second;
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto [it, fresh] = terms.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        Polynomial out = a;
        for (auto& [m, c] : b.terms) out.add_term(m, c);
        return out;
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        Polynomial out = a;
        for (auto& [m, c] : b.terms) out.add_term(m, -c);
        return out;
    }

    Polynomial negated() const {
        Polynomial out = *this;
        for (auto& [m, c] : out.terms) c = -c;
        return out;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial out;
        for (auto& [ma, ca] : a.terms)
            for (auto& [mb, cb] : b.terms) out.add_term(ma.times(mb), ca * cb);
        return out;
    }

    Polynomial scaled(const Rational& c) const {
        Polynomial out;
        if (c == 0) return out;
        for (auto& [m, k] : terms) out.terms[m] = k * c;
        return out;
    }

    Polynomial pow(unsigned e) const {
        Polynomial r = Polynomial::constant(1);
        for (unsigned i = 0; i < e; ++i) r = r * (*this);
        return r;
    }

    // Leading term under the graded order.
    std::pair<Monomial, Rational> leading() const {
        auto it = std::prev(terms.end());
        return {it->first, it->second};
    }

    /// Simultaneous substitution var -> sign * newVar (exponents carried over).
    Polynomial substitute_signed(
        const std::map<std::string, std::pair<std::string, int>>& renames) const {
        Polynomial out;
        for (auto& [m, c] : terms) {
            Monomial nm;
            Rational nc = c;
            std::map<std::string, int> exps;
            for (auto& [v, e] : m.factors) {
                auto it = renames.find(v);
                if (it == renames.end()) {
                    exps[v] += e;
                } else {
                    exps[it->second.first] += e;
                    if (it->second.second < 0 && (e & 1)) nc = -nc;
                }
            }
            for (auto& [v, e] : exps)
                if (e != 0) nm.factors.emplace_back(v, e);
            out.add_term(nm, nc);
        }
        return out;
    }

    /// Substitution var -> var + shiftVar, expanded binomially.
    Polynomial substitute_shift(const std::string& var, const std::string& shift_var) const {
        Polynomial out;
        for (auto& [m, c] : terms) {
            int e = m.exponent_of(var);
            if (e == 0) {
                out.add_term(m, c);
                continue;
            }
            Monomial rest;
            for (auto& [v, k] : m.factors)
                if (v != var) rest.factors.emplace_back(v, k);
            for (int j = 0; j <= e; ++j) {
                Monomial part = rest.times(Monomial::variable(var, j))
                                    .times(Monomial::variable(shift_var, e - j));
                out.add_term(part, c * Rational(binomial_int(e, j)));
            }
        }
        return out;
    }

    // Coefficients as polynomials in the remaining variables, indexed by power of var.
    std::map<int, Polynomial> coefficients_in(const std::string& var) const {
        std::map<int, Polynomial> out;
        for (auto& [m, c] : terms) {
            int e = m.exponent_of(var);
            Monomial rest;
            for (auto& [v, k] : m.factors)
                if (v != var) rest.factors.emplace_back(v, k);
            out[e].add_term(rest, c);
        }
        return out;
    }

    int min_degree_in(const std::string& var) const {
        int best = -1;
        for (auto& [m, c] : terms) {
            int e = m.exponent_of(var);
            if (best < 0 || e < best) best = e;
        }
        return best;  // -1 for the zero polynomial
    }

    Polynomial derivative(const std::string& var) const {
        Polynomial out;
        for (auto& [m, c] : terms) {
            int e = m.exponent_of(var);
            if (e == 0) continue;
            Monomial rest;
            for (auto& [v, k] : m.factors) {
                if (v == var) {
                    if (k > 1) rest.factors.emplace_back(v, k - 1);
                } else {
                    rest.factors.emplace_back(v, k);
                }
            }
            out.add_term(rest, c * e);
        }
        return out;
    }

    // Largest monomial dividing every term.
    Monomial monomial_content() const {
        if (terms.empty()) return Monomial::one();
        std::map<std::string, int> mins;
        bool first = true;
        for (auto& [m, c] : terms) {
            if (first) {
                for (auto& [v, e] : m.factors) mins[v] = e;
                first = false;
                continue;
            }
            for (auto it = mins.begin(); it != mins.end();) {
                int e = m.exponent_of(it->first);
                if (e == 0) {
                    it = mins.erase(it);
                } else {
                    it->second = std::min(it->second, e);
                    ++it;
                }
            }
        }
        Monomial out;
        for (auto& [v, e] : mins) out.factors.emplace_back(v, e);
        return out;
    }

    std::optional<Polynomial> divide_exact(const Polynomial& divisor) const {
        if (divisor.is_zero()) return std::nullopt;
        Polynomial rem = *this, quot;
        auto [dlm, dlc] = divisor.leading();
        while (!rem.is_zero()) {
            auto [rlm, rlc] = rem.leading();
            auto q = rlm.divide(dlm);
            if (!q) return std::nullopt;
            Rational qc = rlc / dlc;
            Polynomial qt;
            qt.terms[*q] = qc;
            quot = quot + qt;
            rem = rem - qt * divisor;
        }
        return quot;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms == b.terms; }

    std::string str() const {
        if (terms.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        // Highest-degree terms first.
        for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
            const auto& [m, c] = *it;
            Rational ac = c < 0 ? Rational(-c) : c;
            if (first) {
                if (c < 0) os << "-";
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            bool need_coeff = ac != 1 || m.is_one();
            if (need_coeff) os << ac.str();
            bool prev = need_coeff;
            for (auto& [v, e] : m.factors) {
                if (prev) os << "*";
                os << v;
                if (e != 1) os << "^" << e;
                prev = true;
            }
        }
        return os.str();
    }
};

}  // namespace hopftr
