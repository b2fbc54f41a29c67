#include "hopftr/families.hpp"
#include "hopftr/hopf.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hopftr;

namespace {

Combo G(const std::string& text) { return Combo::of(parse_graph(text)); }

Combo sum(std::initializer_list<std::pair<std::string, int>> terms) {
    Combo out;
    for (auto& [text, c] : terms) out.add(parse_graph(text), c);
    return out;
}

TensorCombo tsum(std::initializer_list<std::tuple<std::string, std::string, int>> terms) {
    TensorCombo out;
    for (auto& [l, r, c] : terms) out.add(parse_graph(l), parse_graph(r), c);
    return out;
}

Combo star_power(int n) {
    Combo acc = G("<1>");
    for (int i = 1; i < n; ++i) acc = star(acc, G("<1>"));
    return acc;
}

}  // namespace

TEST_CASE("star product worked examples") {
    CHECK(star(G("<1>"), G("<1 2>")) == sum({{"<1 <2 3>>", 1}, {"<<1 2> 3>", 1}}));
    CHECK(star(G("<1 2>"), G("<1>")) == sum({{"<1 <2 3>>", 1}, {"<<1 2> 3>", 1}}));
    CHECK(star(G("<<1 2> 3>"), G("<1>")) == sum({{"<<<1 2> 3> 4>", 1}, {"<<1 2> <3 4>>", 1}}));
    CHECK(star(G("<1>"), G("<<1 2> 3>")) ==
          sum({{"<<<1 2> 3> 4>", 1}, {"<<1 <2 3>> 4>", 1}, {"<1 <<2 3> 4>>", 1}}));
    CHECK(star(G("<1 2>"), G("<1 2>")) ==
          sum({{"<<1 2> <3 4>>", 1},
               {"<<<1 2> 3> 4>", 1},
               {"<<1 <2 3>> 4>", 1},
               {"<1 <2 <3 4>>>", 1},
               {"<1 <<2 3> 4>>", 1}}));
}

TEST_CASE("star unit and noncommutativity") {
    Combo e = Combo::of(TaggedGraph::empty_graph());
    CHECK(star(e, G("<1>")) == G("<1>"));
    CHECK(star(G("<1>"), e) == G("<1>"));
    CHECK(star(G("<1>"), G("<<1 2> 3>")).terms.size() == 3);
    CHECK(star(G("<<1 2> 3>"), G("<1>")).terms.size() == 2);
}

TEST_CASE("star grading and loop extension") {
    // leaf counts add termwise
    for (auto& a : family_Xbar(3, 1))
        for (auto& b : family_Xbar(2, 1))
            for (auto& [t, c] : star(Combo::of(a), Combo::of(shift_integer_labels(b, 3))).terms)
                CHECK(t.slot_count() == a.slot_count() + b.slot_count());

    // contraction commutes with the product on a worked case
    Combo lhs = star(contract(G("<1 2>"), 1), G("<1>"));
    Combo rhs;
    for (auto& [t, c] : star(G("<1 2>"), G("<1>")).terms) rhs.add(contract(t, 1), c);
    CHECK(lhs == rhs);
}

TEST_CASE("coproduct worked examples") {
    CHECK(coproduct(G("<1 2>")) ==
          tsum({{"0", "<1 2>", 1}, {"1", "2", 1}, {"2", "1", 1}, {"<1 2>", "0", 1}}));
    CHECK(coproduct(G("<<1 2> 3>")) ==
          tsum({{"0", "<<1 2> 3>", 1},
                {"1", "<2 3>", 1},
                {"2", "<1 3>", 1},
                {"3", "<1 2>", 1},
                {"<1 2>", "3", 1},
                {"<1 3>", "2", 1},
                {"<2 3>", "1", 1},
                {"<<1 2> 3>", "0", 1}}));
    CHECK(coproduct(G("<1 <2 3>>")) ==
          tsum({{"0", "<1 <2 3>>", 1},
                {"1", "<2 3>", 1},
                {"2", "<1 3>", 1},
                {"3", "<1 2>", 1},
                {"<1 2>", "3", 1},
                {"<1 3>", "2", 1},
                {"<2 3>", "1", 1},
                {"<1 <2 3>>", "0", 1}}));
    CHECK(coproduct(G("<1 2> | 1~2")) ==
          tsum({{"0", "<1 2> | 1~2", 1}, {"1", "0", 2}, {"<1 2> | 1~2", "0", 1}}));
    CHECK(coproduct(G("<1 <2 3>> | 2~3")) ==
          tsum({{"0", "<1 <2 3>> | 2~3", 1},
                {"1", "<1 2> | 1~2", 1},
                {"<1 2>", "0", 4},
                {"<1 2> | 1~2", "1", 1},
                {"<1 <2 3>> | 2~3", "0", 1}}));
}

TEST_CASE("coproduct splits label sets disjointly and symmetrically") {
    for (auto& t : family_Y(4)) {
        size_t n = t.labels().size();
        auto dx = coproduct(Combo::of(t));
        CHECK(dx.terms.size() == (size_t(1) << n));
        for (auto& [pr, c] : dx.terms) {
            size_t ln = pr.first.is_empty() ? 0 : pr.first.labels().size();
            size_t rn = pr.second.is_empty() ? 0 : pr.second.labels().size();
            CHECK(ln + rn == n);
            // transpose term present with the same coefficient
            auto it = dx.terms.find({pr.second, pr.first});
            REQUIRE(it != dx.terms.end());
            CHECK(it->second == c);
        }
    }
}

TEST_CASE("reduced coproduct and counit") {
    CHECK(reduced_coproduct(G("<1 2>")) == tsum({{"1", "2", 1}, {"2", "1", 1}}));
    CHECK(reduced_coproduct(G("<1>")).is_zero());
    Combo e = Combo::of(TaggedGraph::empty_graph());
    CHECK(reduced_coproduct(e) == tsum({{"0", "0", -1}}));

    CHECK(counit(e) == 1);
    CHECK(counit(G("<1 2>")) == 0);
    CHECK(counit(e.scaled(3) + G("<1>")) == 3);
}

TEST_CASE("antipode worked examples") {
    CHECK(antipode(G("<1>")) == sum({{"1", -1}}));
    CHECK(antipode(G("<1 2>")) == sum({{"<2 1>", 1}}));
    CHECK(antipode(G("<<1 2> 3>")) ==
          sum({{"<1 <2 3>>", 1}, {"<<3 2> 1>", -1}, {"<3 <2 1>>", -1}}));
    CHECK(antipode(Combo::of(TaggedGraph::empty_graph())) ==
          Combo::of(TaggedGraph::empty_graph()));
}

TEST_CASE("antipode commutes with contraction") {
    CHECK(antipode(contract(G("<1 2>"), 1)) == contract(antipode(G("<1 2>")), 1));
    CHECK(antipode(contract(G("<1 <2 3>>"), 2)) == contract(antipode(G("<1 <2 3>>")), 2));
}

TEST_CASE("antipode sign laws") {
    // term count preserved, coefficient sum = (-1)^degree
    for (int n = 1; n <= 4; ++n) {
        for (auto& t : family_Y(n)) {
            Rational total = 0;
            for (auto& [g, c] : antipode(Combo::of(t)).terms) {
                CHECK(g.slot_count() == t.slot_count());
                total += c;
            }
            CHECK(total == (n % 2 ? Rational(-1) : Rational(1)));
        }
    }
    // star powers reverse with alternating sign
    for (int n = 1; n <= 5; ++n) {
        Combo reversed = Combo::of(TaggedGraph::leaf(std::to_string(n)));
        for (int v = n - 1; v >= 1; --v)
            reversed = star(reversed, Combo::of(TaggedGraph::leaf(std::to_string(v))));
        CHECK(antipode(star_power(n)) == reversed.scaled(n % 2 ? Rational(-1) : Rational(1)));
    }
}

TEST_CASE("star powers expand the full family with unit coefficients") {
    for (int n = 1; n <= 6; ++n) {
        Combo p = star_power(n);
        auto family = family_X(n);
        CHECK(p.terms.size() == family.size());
        for (auto& g : family) {
            auto it = p.terms.find(g);
            REQUIRE(it != p.terms.end());
            CHECK(it->second == 1);
        }
    }
}

TEST_CASE("loday-ronco product and coproduct") {
    Combo one_vertex = G("<1 2>");
    CHECK(lr_product(G("<1>"), one_vertex) == one_vertex);
    CHECK(lr_product(one_vertex, G("<1>")) == one_vertex);
    for (int n = 1; n <= 5; ++n)
        for (auto& t : family_Y(n)) CHECK(lr_product(Combo::of(t), G("<1>")) == Combo::of(t));

    CHECK(lr_product(one_vertex, one_vertex) ==
          sum({{"<1 <2 3>>", 1}, {"<<1 2> 3>", 1}}));
    CHECK(lr_product(one_vertex, one_vertex) == star(star(G("<1>"), G("<1>")), G("<1>")));

    CHECK(lr_coproduct(G("<1>")) == tsum({{"1", "1", 1}}));
    CHECK(lr_coproduct(one_vertex) == tsum({{"1", "<1 2>", 1}, {"<1 2>", "1", 1}}));

    // vertex count preserved termwise
    for (auto& t : family_Y(4))
        for (auto& [pr, c] : lr_coproduct(Combo::of(t)).terms)
            CHECK(pr.first.degree() + pr.second.degree() == t.degree());

    CHECK_THROWS_AS(lr_product(G("<1 2> | 1~2"), one_vertex), GraphError);
    CHECK_THROWS_AS(lr_coproduct(G("<1 2> | 1~2")), GraphError);
}

TEST_CASE("star relation against the loday-ronco route") {
    Combo unit_tree = G("<1 2>");  // the one-vertex tree (1)
    for (int da = 0; da + 0 <= 5; ++da) {
        for (int db = 0; da + db <= 5; ++db) {
            for (auto& a : family_Y(da)) {
                for (auto& b : family_Y(db)) {
                    Combo via_lr = lr_product(lr_product(Combo::of(a), unit_tree), Combo::of(b));
                    Combo direct = star(Combo::of(a), Combo::of(b));
                    CHECK(via_lr == direct);
                }
            }
        }
    }
}

TEST_CASE("label collision handling") {
    CHECK_THROWS_AS(star(G("<a b>"), G("<b c>")), GraphError);
    CHECK(star(G("<a b>"), G("<c d>")) .terms.size() == 5);
}
