#include "hopftr/families.hpp"
#include "hopftr/tagged_graph.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace hopftr;

TEST_CASE("bracket parsing and canonical rendering") {
    CHECK(parse_graph("<<1 2> <3 <4 5>>>").key() == "<<1 2> <3 <4 5>>>");
    CHECK(parse_graph("0").is_empty());
    CHECK(render_graph(TaggedGraph::empty_graph()) == "0");
    CHECK(parse_graph(" < 1   2 > ").key() == "<1 2>");
    CHECK(parse_graph("<1>").key() == "1");  // apex angle around a lone leaf

    auto loop = parse_graph("<1 2> | 1~2");
    CHECK(loop.loop_count() == 1);
    CHECK(loop.free_slots().empty());
    CHECK(loop.key() == "<1 2> | 1~2");

    // whitespace-insensitive pair list, arbitrary identifiers on paired slots
    CHECK(parse_graph("<a <x y>> | 2 ~ 3").key() == "<a <2 3>> | 2~3");

    CHECK_THROWS_AS(parse_graph("<1 2"), ParseError);
    CHECK_THROWS_AS(parse_graph("<1 1>"), GraphError);           // duplicate free label
    CHECK_THROWS_AS(parse_graph("<<1 2> 3> | 1~3"), GraphError); // free label inside a loop
    CHECK_THROWS_AS(parse_graph("<<1 2> <3 4>> | 1~3,2~4"), GraphError);  // crossing
    CHECK_THROWS_AS(parse_graph("<1 2> | 1~5"), ParseError);
    CHECK_THROWS_AS(parse_graph("<1 2> | 1~2,2~1"), ParseError);
}

TEST_CASE("grafting") {
    TaggedGraph a = TaggedGraph::leaf("1"), b = TaggedGraph::leaf("2");
    CHECK(graft(a, b).key() == "<1 2>");
    CHECK(graft(graft(a, b), TaggedGraph::leaf("3")).key() == "<<1 2> 3>");
    CHECK(graft(TaggedGraph::leaf("0x"), parse_graph("<1 2>")).key() == "<0x <1 2>>");
    CHECK(graft(a, b).degree() == 1 + 0 + 0);
    CHECK_THROWS_AS(graft(TaggedGraph::empty_graph(), a), GraphError);
}

TEST_CASE("contraction") {
    CHECK(contract(parse_graph("<1 2>"), 1).key() == "<1 2> | 1~2");
    CHECK(contract(parse_graph("<1 <2 3>>"), 2).key() == "<1 <2 3>> | 2~3");
    // nested double contraction, balanced by construction
    auto twice = contract(contract(parse_graph("<<1 2> <3 4>>"), 1), 1);
    CHECK(twice.loop_count() == 2);
    CHECK(twice.free_slots().empty());
    CHECK(twice.degree() == 3);
    CHECK(pairing_is_balanced(twice.pair_of()));
    CHECK_THROWS_AS(contract(parse_graph("<1 2>"), 2), GraphError);
    CHECK_THROWS_AS(contract(parse_graph("<1 2> | 1~2"), 1), GraphError);
}

TEST_CASE("contraction preserves vertices, drops two free leaves, stays balanced") {
    for (auto& t : family_Y(4)) {
        for (int pos = 1; pos + 1 <= int(t.free_slots().size()); ++pos) {
            auto c = contract(t, pos);
            CHECK(c.degree() == t.degree());
            CHECK(c.free_slots().size() == t.free_slots().size() - 2);
            CHECK(pairing_is_balanced(c.pair_of()));
        }
    }
}

TEST_CASE("induced subgraphs") {
    auto g = parse_graph("<<1 2> 3>");
    CHECK(induced_subgraph(g, {"1", "3"}).key() == "<1 3>");
    CHECK(induced_subgraph(g, {"1", "2"}).key() == "<1 2>");
    CHECK(induced_subgraph(g, {}).is_empty());
    CHECK(induced_subgraph(g, {"1", "2", "3"}).key() == g.key());
    CHECK_THROWS_AS(induced_subgraph(g, {"7"}), GraphError);

    // complement split accounts for every leaf exactly once
    for (auto& t : family_Y(3)) {
        auto labels = t.free_labels();
        int n = int(labels.size());
        for (uint32_t mask = 0; mask < (1u << n); ++mask) {
            std::set<std::string> in, out;
            for (int i = 0; i < n; ++i) (mask >> i & 1 ? in : out).insert(labels[size_t(i)]);
            auto l = induced_subgraph(t, in);
            auto r = induced_subgraph(t, out);
            size_t total = (l.is_empty() ? 0 : l.labels().size()) +
                           (r.is_empty() ? 0 : r.labels().size());
            CHECK(total == labels.size());
        }
    }
}

TEST_CASE("catalan numbers and tree counts") {
    CHECK(catalan(0) == 1);
    CHECK(catalan(3) == 5);
    CHECK(catalan(6) == 132);
    CHECK(Integer(family_Y(6).size()) == catalan(6));
    for (int n = 0; n <= 8; ++n) CHECK(Integer(family_Y(n).size()) == catalan(unsigned(n)));
    for (int n = 0; n <= 6; ++n) CHECK(family_X(n + 1).size() == family_Y(n).size());
    CHECK(family_X(0).size() == 1);
    CHECK(family_X(0)[0].is_empty());
}

TEST_CASE("permutation bijection") {
    CHECK(tree_from_permutation({2, 3, 1}).key() == "<<1 2> <3 4>>");
    CHECK(tree_from_permutation({1, 3, 2}).key() == "<<1 2> <3 4>>");
    CHECK(tree_from_permutation({1}).key() == "<1 2>");

    auto fiber = permutation_fiber(parse_graph("<<1 2> <3 4>>"));
    REQUIRE(fiber.size() == 2);
    CHECK(fiber[0] == Permutation{1, 3, 2});
    CHECK(fiber[1] == Permutation{2, 3, 1});
    CHECK(permutation_fiber(parse_graph("<1 2>")) == std::vector<Permutation>{{1}});

    // fibers partition S_n
    for (int n = 1; n <= 5; ++n) {
        size_t total = 0;
        std::set<std::vector<int>> seen;
        for (auto& t : family_Y(n)) {
            auto f = permutation_fiber(t);
            total += f.size();
            for (auto& p : f) CHECK(seen.insert(p).second);
        }
        CHECK(Integer(total) == factorial(unsigned(n)));
    }
    CHECK_THROWS_AS(permutation_fiber(parse_graph("<1 2> | 1~2")), GraphError);
}

TEST_CASE("recursion-expansion families") {
    CHECK(family_Xg(0, 1).size() == 1);
    CHECK(family_Xg(0, 1)[0].key() == "<1 2> | 1~2");
    CHECK(family_Xg(1, 1).size() == 4);
    CHECK(family_Xg(0, 2).size() == 5);
    {
        // every entry distinct here, and the family size matches s_2
        std::set<std::string> keys;
        for (auto& g : family_Xg(0, 2)) keys.insert(g.key());
        CHECK(keys.size() == 5);
    }
    CHECK(family_Xg(2, 0).size() == 1);
    CHECK(family_Xg(3, 0).size() == 2);

    // labeled family: all assignments over the shape family
    CHECK(family_EO(2, 0).size() == 2);
    CHECK(family_EO(3, 0).size() == 12);
    for (int k = 2; k <= 5; ++k)
        CHECK(Integer(family_EO(k, 0).size()) ==
              catalan(unsigned(k - 1)) * factorial(unsigned(k)));

    // loop families connect only comparable vertices: all balanced
    for (auto& g : family_Xg(1, 2)) CHECK(pairing_is_balanced(g.pair_of()));
}

TEST_CASE("closure family under contractions") {
    CHECK(family_Xbar(4).size() == 30);  // 5 shapes x (1 + 3 + 2) pairings
    CHECK(family_Xbar(0).size() == 1);
    for (auto& g : family_Xbar(5, 2)) CHECK(pairing_is_balanced(g.pair_of()));
}

TEST_CASE("round-trip over enumerated families") {
    auto check_family = [](const std::vector<TaggedGraph>& fam) {
        for (auto& g : fam) {
            auto back = parse_graph(render_graph(g));
            CHECK(back == g);
        }
    };
    check_family(family_Y(5));
    check_family(family_Xbar(5));
    check_family(family_Xg(1, 1));
    check_family(family_Xg(0, 2));
    check_family(family_EO(3, 0));
}

TEST_CASE("work budget guard") {
    CHECK_THROWS_AS(family_Y(40), BoundError);
}
