#include "hopftr/coefficients.hpp"
#include "hopftr/recursion.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hopftr;

namespace {

RatExpr constant(long n, long d = 1) { return RatExpr::constant(Rational(n, d)); }

Polynomial var(const std::string& v, int e = 1) { return Polynomial::variable(v, e); }

}  // namespace

TEST_CASE("curve parsing") {
    CHECK(CurveModel::parse("airy").y_odd == std::vector<Rational>{1});
    auto c = CurveModel::parse("y: 1, 0, -2/3");
    CHECK(c.y_odd == std::vector<Rational>{1, 0, Rational(-2, 3)});
    CHECK_THROWS_AS(CurveModel::parse("y: 0, 1"), std::invalid_argument);
    CHECK_THROWS_AS(CurveModel::parse("quartic"), std::invalid_argument);
}

TEST_CASE("propagator kernel") {
    // series oracle: shift p1 = p2 + t; the double pole carries coefficient 1
    // and no residue
    RatExpr b = bergmann("p1", "p2");
    RatExpr shifted(b.num.substitute_shift("p1", "p2"), b.den.substitute_shift("p1", "p2"));
    auto s = expand_local(shifted, "p1", 0);
    CHECK(s.coefficient(-2) == constant(1));
    CHECK(s.coefficient(-1).is_zero());

    CHECK(bergmann("p1", "p2") == bergmann("p2", "p1"));
    // evaluated on conjugate points: 1/(2q)^2
    RatExpr onconj = bergmann("q", "w").substitute_signed({{"w", {"q", -1}}});
    CHECK(onconj == RatExpr(Polynomial::constant(1), var("q", 2).scaled(4)));
    CHECK_THROWS_AS(bergmann("p", "p"), std::invalid_argument);
}

TEST_CASE("vertex weight") {
    CHECK(vertex_omega(CurveModel::airy(), "z") == RatExpr(var("z", 2).scaled(4)));
    CurveModel cubic({Rational(1), Rational(1)});
    CHECK(vertex_omega(cubic, "z") == RatExpr(var("z", 2).scaled(4) + var("z", 4).scaled(4)));
    // even, vanishing to order exactly 2 at the branch point
    RatExpr w = vertex_omega(cubic, "z");
    CHECK(w.substitute_negate("z") == w);
    CHECK(w.num.min_degree_in("z") == 2);
}

TEST_CASE("recursion kernel closed form") {
    CurveModel airy = CurveModel::airy();
    RatExpr k = recursion_kernel(airy, "z", "p");
    // independent route: (1/2) [F(z) - F(-z)] / omega with F(xi) = -1/(xi - p)
    RatExpr f(Polynomial::constant(-1), var("z") - var("p"));
    RatExpr half_integral = (f - f.substitute_negate("z")).scaled(Rational(1, 2));
    CHECK(k == half_integral / vertex_omega(airy, "z"));
    CHECK(k == RatExpr(Polynomial::constant(1),
                       var("z").scaled(4) * (var("p", 2) - var("z", 2))));
    // odd in z, simple pole at the branch point
    CHECK(k.substitute_negate("z") == k.negated());
    CHECK(pole_order_at_origin(k, "z") == 1);

    CurveModel cubic({Rational(1), Rational(1)});
    CHECK(recursion_kernel(cubic, "z", "p") ==
          half_integral / vertex_omega(cubic, "z"));
}

TEST_CASE("direct recursion base cases and oracles") {
    Evaluator ev(CurveModel::airy());
    CHECK(ev.w(-1, 3).is_zero());
    CHECK(ev.w(0, 1).is_zero());
    CHECK(ev.w(0, 2) == bergmann("z0", "z1"));

    // independent residue oracle for the first nontrivial case
    {
        RatExpr k = recursion_kernel(CurveModel::airy(), "q", "z0");
        RatExpr b1 = bergmann("q", "z1");
        RatExpr b2 = bergmann("w", "z2").substitute_signed({{"w", {"q", -1}}});
        RatExpr b3 = bergmann("q", "z2");
        RatExpr b4 = bergmann("w", "z1").substitute_signed({{"w", {"q", -1}}});
        RatExpr oracle = residue_at_origin(k * (b1 * b2 + b3 * b4), "q");
        CHECK(oracle == RatExpr(Polynomial::constant(Rational(1, 2)),
                                var("z0", 2) * var("z1", 2) * var("z2", 2)));
        CHECK(ev.w(0, 3) == oracle);
    }
    {
        RatExpr k = recursion_kernel(CurveModel::airy(), "q", "z0");
        RatExpr loop = bergmann("q", "w").substitute_signed({{"w", {"q", -1}}});
        RatExpr oracle = residue_at_origin(k * loop, "q");
        CHECK(oracle == RatExpr(Polynomial::constant(Rational(1, 16)), var("z0", 4)));
        CHECK(ev.w(1, 1) == oracle);
    }
}

TEST_CASE("correlators are symmetric in all variables") {
    Evaluator ev(CurveModel::airy());
    auto symmetric = [&](int g, int n) {
        RatExpr w = ev.w(g, n);
        for (int i = 0; i + 1 < n; ++i) {
            std::map<std::string, std::pair<std::string, int>> swap_map{
                {"z" + std::to_string(i), {"z" + std::to_string(i + 1), 1}},
                {"z" + std::to_string(i + 1), {"z" + std::to_string(i), 1}}};
            CHECK(w.substitute_signed(swap_map) == w);
        }
    };
    symmetric(0, 3);
    symmetric(0, 4);
    symmetric(1, 2);
}

TEST_CASE("airy correlators are even negative monomial sums") {
    Evaluator ev(CurveModel::airy());
    for (auto& [g, n] : std::vector<std::pair<int, int>>{{0, 3}, {0, 4}, {1, 1}, {1, 2}}) {
        RatExpr w = ev.w(g, n);
        REQUIRE(w.den.terms.size() == 1);
        const Monomial& dm = w.den.terms.begin()->first;
        for (auto& [m, c] : w.num.terms) {
            for (int i = 0; i < n; ++i) {
                std::string v = "z" + std::to_string(i);
                int e = dm.exponent_of(v) - m.exponent_of(v);
                CHECK(e >= 2);
                CHECK(e % 2 == 0);
            }
        }
    }
}

TEST_CASE("weighted map on single graphs") {
    Evaluator ev(CurveModel::airy());
    RatExpr phi1 = ev.phi_eval(parse_graph("<z1 z2>"), {"z0", 1}, {{"z1", 1}, {"z2", 1}});
    RatExpr phi2 = ev.phi_eval(parse_graph("<z2 z1>"), {"z0", 1}, {{"z2", 1}, {"z1", 1}});
    CHECK(phi1 + phi2 == ev.w(0, 3));
    // a single vertex's mirror pair evaluates identically
    CHECK(phi1 == phi2);

    CHECK(ev.phi_eval(parse_graph("<1 2> | 1~2"), {"z0", 1}, {}) == ev.w(1, 1));

    // swap invariance on a deeper graph
    RatExpr a = ev.phi_eval(parse_graph("<<1 2> 3> | 1~2"), {"z0", 1}, {{"z1", 1}});
    RatExpr b = ev.phi_eval(parse_graph("<1 <2 3>> | 2~3"), {"z0", 1}, {{"z1", 1}});
    CHECK(a == b);
}

TEST_CASE("graph sum equals the direct recursion on small cases") {
    Evaluator ev(CurveModel::airy());
    for (auto& [g, n] : std::vector<std::pair<int, int>>{{0, 3}, {1, 1}, {1, 2}}) {
        CHECK(ev.w_graph_sum(g, n).value == ev.w_direct(g, n).value);
    }
    // and on a second curve
    Evaluator ev2(CurveModel::parse("y: 1, 1"));
    CHECK(ev2.w_graph_sum(0, 3).value == ev2.w_direct(0, 3).value);
    CHECK(ev2.w_graph_sum(1, 1).value == ev2.w_direct(1, 1).value);
}

TEST_CASE("s sequence") {
    CHECK(s_sequence(1) == 1);
    CHECK(s_sequence(2) == 5);
    CHECK(s_sequence(3) == 60);
    CHECK(Integer(family_Xg(0, 2).size()) == s_sequence(2));
    CHECK(Integer(family_Xg(0, 3).size()) == s_sequence(3));
}

TEST_CASE("coefficient formulas") {
    CHECK(a_formula_genus0(2, 1, CoeffMode::FormulaStatement) == Rational(1, 2));
    CHECK(a_formula_genus0(2, 1, CoeffMode::FormulaProof) == Rational(1, 2));
    CHECK(a_formula_genus0(4, 2, CoeffMode::FormulaStatement) == Rational(1, 15));
    CHECK(a_formula_genus0(4, 2, CoeffMode::FormulaProof) == Rational(1, 30));
    CHECK(b_formula(1, 0, CoeffMode::FormulaStatement) == Rational(1, 2));
    CHECK(b_formula(1, 0, CoeffMode::FormulaProof) == Rational(1, 2));
    CHECK(b_formula(2, 0, CoeffMode::FormulaStatement) == Rational(1, 6));
    CHECK(b_formula(2, 0, CoeffMode::FormulaProof) == Rational(1, 12));
}

TEST_CASE("brute-forced coefficient tables") {
    auto t02 = coeff_table(0, 2, CoeffMode::BruteForced);
    REQUIRE(t02.find(0, 1) != nullptr);
    CHECK(t02.find(0, 1)->value == Rational(1, 2));
    CHECK(t02.find(0, 1)->integral_reciprocal);

    auto t04 = coeff_table(0, 4, CoeffMode::BruteForced);
    CHECK(t04.find(0, 2)->value == Rational(1, 30));  // decides for the in-proof variant

    auto t10 = coeff_table(1, 0, CoeffMode::BruteForced);
    CHECK(t10.handle_entry()->value == Rational(1, 2));

    // the written single handle constant has no consistent value here; the
    // coarse count ratio is flagged as a property violation
    auto t12 = coeff_table(1, 2, CoeffMode::BruteForced);
    CHECK(t12.handle_entry()->value == Rational(3, 64));
    CHECK_FALSE(t12.handle_entry()->integral_reciprocal);
}

TEST_CASE("splitting identity verifies on small cases") {
    auto airy = CurveModel::airy();
    for (auto& [g, k] : std::vector<std::pair<int, int>>{{0, 2}, {1, 0}, {1, 1}}) {
        auto rep = verify_coproduct_identity(airy, g, k);
        CHECK(rep.equal);
        CHECK(rep.all_reciprocals_integral);
    }
    // identity also holds on a non-airy curve
    auto rep = verify_coproduct_identity(CurveModel::parse("y: 1, -1/2"), 1, 1);
    CHECK(rep.equal);
}
