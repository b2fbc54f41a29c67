#include "hopftr/axioms.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hopftr;

namespace {

const LawResult& law(const AxiomReport& r, const std::string& name) {
    for (auto& l : r.laws)
        if (l.law == name) return l;
    FAIL("unknown law " + name);
    return r.laws.front();
}

}  // namespace

TEST_CASE("loop-free sector at four leaves") {
    AxiomReport r = verify_axioms(4, 0);
    CHECK(law(r, "star-associativity").passed);
    CHECK(law(r, "unit").passed);
    CHECK(law(r, "coassociativity").passed);
    CHECK(law(r, "counit").passed);
    CHECK(law(r, "counit-multiplicativity").passed);
    CHECK(law(r, "antipode").passed);

    // The compatibility identity fails on loop-free trees already: the two
    // product trees of <1> * <1 2> share every middle coproduct term (mass 16)
    // while the split-and-multiply side reaches mass 10. Pinned here as the
    // documented counterexample; see docs/conventions.md.
    const LawResult& compat = law(r, "product-coproduct-compatibility");
    CHECK_FALSE(compat.passed);
    CHECK(compat.counterexample == "1 , <1 2>");
    CHECK_FALSE(compat.failures_involve_loops);
}

TEST_CASE("loop sector failures are confined to the straddle collapse") {
    AxiomReport r = verify_axioms(4, 1);
    CHECK(law(r, "star-associativity").passed);
    CHECK(law(r, "unit").passed);
    CHECK(law(r, "counit-multiplicativity").passed);

    for (const char* name : {"coassociativity", "counit", "antipode"}) {
        const LawResult& l = law(r, name);
        CHECK_FALSE(l.passed);
        CHECK(l.failures_involve_loops);  // every failing input carries a loop
        CHECK(l.counterexample == "<1 2> | 1~2");
    }
}

TEST_CASE("report bookkeeping") {
    AxiomReport r = verify_axioms(3, 1);
    CHECK(r.max_leaves == 3);
    CHECK(r.max_loops == 1);
    CHECK_FALSE(r.all_passed());
    // the loop-free compatibility failure keeps this false
    CHECK_FALSE(r.failures_all_loop_attributable());
    long total = 0;
    for (auto& l : r.laws) total += l.checked;
    CHECK(total > 0);
}
