#include "hopftr/laurent.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace hopftr;

namespace {

Polynomial var(const std::string& v, int e = 1) { return Polynomial::variable(v, e); }

// Random rational function with poles only at the origin in q:
// P(q, p) / (q^k * c), small integer coefficients.
RatExpr random_origin_pole(std::mt19937& rng) {
    std::uniform_int_distribution<int> coeff(-4, 4), expq(0, 3), expp(0, 2), order(1, 4);
    Polynomial num;
    for (int t = 0; t < 4; ++t) {
        Rational c(coeff(rng));
        if (c == 0) continue;
        Monomial m = Monomial::variable("q", expq(rng)).times(Monomial::variable("p", expp(rng)));
        num.add_term(m, c);
    }
    if (num.is_zero()) num = Polynomial::constant(1);
    return RatExpr(num, Polynomial::variable("q", order(rng)));
}

}  // namespace

TEST_CASE("polynomial arithmetic and normal form") {
    Polynomial a = var("x") + var("y");
    Polynomial b = var("x") - var("y");
    CHECK((a * b) == (var("x", 2) - var("y", 2)));
    CHECK(a.substitute_signed({{"x", {"x", -1}}}) == (var("x").negated() + var("y")));
    CHECK(a.derivative("x") == Polynomial::constant(1));
    CHECK((a * a).derivative("x") == (var("x") + var("y")).scaled(2));

    auto quotient = (a * b).divide_exact(b);
    REQUIRE(quotient.has_value());
    CHECK(*quotient == a);
    CHECK(!(a * b + Polynomial::constant(1)).divide_exact(b).has_value());

    // shift substitution x -> x + h
    Polynomial sq = var("x", 2);
    CHECK(sq.substitute_shift("x", "h") ==
          (var("x", 2) + (var("x") * var("h")).scaled(2) + var("h", 2)));
}

TEST_CASE("rational expression normalization and equality") {
    RatExpr e(var("x", 2) - var("y", 2), var("x") - var("y"));
    CHECK(e == RatExpr(var("x") + var("y")));  // exact quotient collapses
    RatExpr f(var("x").scaled(2), var("x", 3).scaled(4));
    CHECK(f == RatExpr(Polynomial::constant(1), var("x", 2).scaled(2)));
    CHECK((e - e).is_zero());
    CHECK_THROWS_AS(RatExpr(var("x"), Polynomial::zero()), std::domain_error);
    CHECK((RatExpr(var("x")) / RatExpr(var("y"))) == RatExpr(var("x"), var("y")));
}

TEST_CASE("local expansion worked examples") {
    // 1/(p^2 - q^2) around q = 0
    RatExpr geo(Polynomial::constant(1), var("p", 2) - var("q", 2));
    auto s = expand_local(geo, "q", 4);
    CHECK(s.coefficient(0) == RatExpr(Polynomial::constant(1), var("p", 2)));
    CHECK(s.coefficient(1).is_zero());
    CHECK(s.coefficient(2) == RatExpr(Polynomial::constant(1), var("p", 4)));
    CHECK(s.truncation_order == 4);

    // 1/q^3 to order 0: the single pole term
    auto pole = expand_local(RatExpr(Polynomial::constant(1), var("q", 3)), "q", 0);
    REQUIRE(pole.coeffs.size() == 1);
    CHECK(pole.coeffs[0].first == -3);
    CHECK(pole.coeffs[0].second == RatExpr(Polynomial::constant(1)));

    // (q + p)^-2 to order 2: p^-2 - 2 q p^-3 + ...
    RatExpr binom(Polynomial::constant(1), (var("q") + var("p")) * (var("q") + var("p")));
    auto sb = expand_local(binom, "q", 2);
    CHECK(sb.coefficient(0) == RatExpr(Polynomial::constant(1), var("p", 2)));
    CHECK(sb.coefficient(1) == RatExpr(Polynomial::constant(-2), var("p", 3)));
}

TEST_CASE("residues at the origin") {
    CHECK(residue_at_origin(RatExpr(Polynomial::constant(1), var("q")), "q") ==
          RatExpr(Polynomial::constant(1)));
    RatExpr f(Polynomial::constant(1) + var("q", 2), var("q", 3));
    CHECK(residue_at_origin(f, "q") == RatExpr(Polynomial::constant(1)));
    CHECK(residue_at_origin(RatExpr(Polynomial::constant(1), var("q", 2)), "q").is_zero());

    LocalSeries s;
    s.var = "q";
    s.truncation_order = -2;
    CHECK_THROWS_AS(residue_at_origin(s), std::invalid_argument);
}

TEST_CASE("pole order") {
    CHECK(pole_order_at_origin(RatExpr(Polynomial::constant(1), var("q", 3)), "q") == 3);
    CHECK(pole_order_at_origin(RatExpr(var("q", 2), var("q")), "q") == 0);
    CHECK(pole_order_at_origin(RatExpr(var("p")), "q") == 0);
}

TEST_CASE("negation substitution is an involution") {
    RatExpr f(Polynomial::constant(1), (var("q") - var("p")) * (var("q") - var("p")));
    RatExpr g = f.substitute_negate("q");
    CHECK(g == RatExpr(Polynomial::constant(1), (var("q") + var("p")) * (var("q") + var("p"))));
    CHECK(g.substitute_negate("q") == f);
    CHECK(RatExpr(var("q", 3)).substitute_negate("q") == RatExpr(var("q", 3).negated()));
    CHECK(RatExpr(var("q", 2)).substitute_negate("q") == RatExpr(var("q", 2)));
}

TEST_CASE("total-derivative residues vanish") {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 40; ++trial) {
        RatExpr f = random_origin_pole(rng);
        // d/dq of num/q^k = (num' q^k - num k q^{k-1}) / q^{2k}
        RatExpr df = RatExpr(f.num.derivative("q")) / RatExpr(f.den) -
                     RatExpr(f.num * f.den.derivative("q")) / RatExpr(f.den * f.den);
        CHECK(residue_at_origin(df, "q").is_zero());
    }
}

TEST_CASE("truncated expansion is a ring homomorphism") {
    std::mt19937 rng(987654);
    for (int trial = 0; trial < 30; ++trial) {
        RatExpr a = random_origin_pole(rng);
        RatExpr b = random_origin_pole(rng);
        int order = 3;
        auto sa = expand_local(a, "q", order);
        auto sb = expand_local(b, "q", order);
        auto prod = multiply(sa, sb);
        auto direct = expand_local(a * b, "q", prod.truncation_order);
        for (auto& [e, c] : prod.coeffs) CHECK(direct.coefficient(e) == c);
        for (auto& [e, c] : direct.coeffs) {
            if (e < prod.truncation_order) CHECK(prod.coefficient(e) == c);
        }
    }
}
