#pragma once

#include "hopftr/laurent.hpp"
#include "hopftr/rat_expr.hpp"

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hopftr {

/// Local spectral-curve model: x(z) = z^2, y(z) an odd polynomial with
/// nonzero linear term, branch point at z = 0, conjugation z -> -z.
struct CurveModel {
    std::vector<Rational> y_odd;  // y(z) = sum y_odd[j] * z^(2j+1)

    CurveModel() : y_odd{1} {}
    explicit CurveModel(std::vector<Rational> coeffs) : y_odd(std::move(coeffs)) {
        if (y_odd.empty() || y_odd[0] == 0)
            throw std::invalid_argument("curve needs a nonzero linear coefficient in y");
    }

    static CurveModel airy() { return CurveModel({Rational(1)}); }

    /// "airy" or "y: c1,c3,c5,..." with exact rational coefficients.
    static CurveModel parse(const std::string& text) {
        std::string t;
        for (char c : text)
            if (c != ' ' && c != '\t') t.push_back(c);
        if (t == "airy" || t == "Airy") return airy();
        const std::string prefix = "y:";
        if (t.rfind(prefix, 0) != 0)
            throw std::invalid_argument("curve spec must be 'airy' or 'y: c1,c3,...'");
        std::vector<Rational> coeffs;
        std::stringstream ss(t.substr(prefix.size()));
        std::string item;
        while (std::getline(ss, item, ','))
            coeffs.push_back(parse_rational(item));
        return CurveModel(std::move(coeffs));
    }

    Polynomial y_polynomial(const std::string& var) const {
        Polynomial p;
        for (size_t j = 0; j < y_odd.size(); ++j)
            p.add_term(Monomial::variable(var, int(2 * j + 1)), y_odd[j]);
        return p;
    }

    std::string spec_text() const {
        std::ostringstream os;
        os << "y:";
        for (size_t j = 0; j < y_odd.size(); ++j) {
            if (j) os << ",";
            os << y_odd[j].str();
        }
        return os.str();
    }
};

/// Genus-zero rational-curve propagator coefficient 1/(v1 - v2)^2.
inline RatExpr bergmann(const std::string& v1, const std::string& v2) {
    if (v1 == v2) throw std::invalid_argument("bergmann kernel needs distinct variables");
    Polynomial diff = Polynomial::variable(v1) - Polynomial::variable(v2);
    return RatExpr(Polynomial::constant(1), diff * diff);
}

/// (y(z) - y(-z)) dx(z)/dz = 4 z y(z), since y is odd and dx = 2z dz.
inline RatExpr vertex_omega(const CurveModel& c, const std::string& var) {
    return RatExpr(Polynomial::variable(var).scaled(4) * c.y_polynomial(var));
}

/// Recursion kernel stripped to its dp/dz coefficient:
///   K(z, p) = (1/2) Int_{-z}^{z} dxi/(xi - p)^2 / omega(z) = 1/(4 y(z) (p^2 - z^2)).
inline RatExpr recursion_kernel(const CurveModel& c, const std::string& z,
                                const std::string& p) {
    if (z == p) throw std::invalid_argument("kernel needs distinct variable names");
    Polynomial den = c.y_polynomial(z).scaled(4) *
                     (Polynomial::variable(p, 2) - Polynomial::variable(z, 2));
    return RatExpr(Polynomial::constant(1), den);
}

}  // namespace hopftr
