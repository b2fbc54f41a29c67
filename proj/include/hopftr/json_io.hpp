#pragma once

#include "hopftr/axioms.hpp"
#include "hopftr/coefficients.hpp"
#include "hopftr/combo.hpp"
#include "hopftr/recursion.hpp"
#include "hopftr/tagged_graph.hpp"

#include <json.hpp>

#include <string>

namespace hopftr {

using Json = nlohmann::json;

inline Json shape_to_json(const TreeShape& shape) {
    size_t pos = 0;
    auto rec = [&](auto&& self) -> Json {
        if (shape.pre[pos] == 0) {
            ++pos;
            return Json(0);
        }
        ++pos;
        Json l = self(self);
        Json r = self(self);
        return Json::array({l, r});
    };
    return rec(rec);
}

inline Json graph_to_json(const TaggedGraph& g) {
    Json j;
    j["graph"] = g.key();
    j["empty"] = g.is_empty();
    if (g.is_empty()) return j;
    j["shape"] = shape_to_json(g.shape());
    Json leaves = Json::array();
    for (size_t s = 0; s < g.labels().size(); ++s)
        leaves.push_back(g.pair_of()[s] >= 0 ? std::to_string(s + 1) : g.labels()[s]);
    j["leaves"] = leaves;
    Json pairs = Json::array();
    for (auto& [a, b] : g.pair_slots()) pairs.push_back(Json::array({a + 1, b + 1}));
    j["loopPairs"] = pairs;
    return j;
}

inline Json combo_to_json(const Combo& x) {
    Json arr = Json::array();
    for (auto& [g, c] : x.terms)
        arr.push_back(Json{{"coefficient", c.str()}, {"graph", g.key()}});
    return arr;
}

inline Json tensor_to_json(const TensorCombo& x) {
    Json arr = Json::array();
    for (auto& [pr, c] : x.terms)
        arr.push_back(Json{{"coefficient", c.str()},
                           {"left", pr.first.key()},
                           {"right", pr.second.key()}});
    return arr;
}

inline Json polynomial_to_json(const Polynomial& p) {
    Json arr = Json::array();
    for (auto& [m, c] : p.terms) {
        Json vars = Json::object();
        for (auto& [v, e] : m.factors) vars[v] = e;
        arr.push_back(Json::array({c.str(), vars}));
    }
    return arr;
}

inline Json ratexpr_to_json(const RatExpr& e) {
    return Json{{"num", polynomial_to_json(e.num)}, {"den", polynomial_to_json(e.den)}};
}

/// Laurent-style monomial-sum rendering when the denominator is a single
/// monomial; falls back to num/den form otherwise.
inline std::string correlator_text(const RatExpr& e) {
    if (e.is_zero()) return "0";
    if (e.den.terms.size() == 1) {
        const auto& [dm, dc] = *e.den.terms.begin();
        std::string out;
        bool first = true;
        for (auto it = e.num.terms.rbegin(); it != e.num.terms.rend(); ++it) {
            Rational c = it->second / dc;
            Rational ac = c < 0 ? Rational(-c) : c;
            out += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
            first = false;
            // exponents of num monomial minus denominator monomial
            std::map<std::string, int> exps;
            for (auto& [v, x] : it->first.factors) exps[v] += x;
            for (auto& [v, x] : dm.factors) exps[v] -= x;
            std::string mono;
            for (auto& [v, x] : exps) {
                if (x == 0) continue;
                if (!mono.empty()) mono += " ";
                mono += v;
                if (x != 1) mono += "^" + std::to_string(x);
            }
            if (mono.empty()) {
                out += ac.str();
            } else {
                if (ac != 1) out += ac.str() + " ";
                out += mono;
            }
        }
        return out;
    }
    return e.str();
}

inline Json correlator_to_json(const Correlator& w) {
    Json j;
    j["genus"] = w.genus;
    j["variables"] = w.vars;
    j["value"] = ratexpr_to_json(w.value);
    j["text"] = correlator_text(w.value);
    return j;
}

inline Json axiom_report_to_json(const AxiomReport& r) {
    Json laws = Json::array();
    for (auto& l : r.laws) {
        Json jl{{"law", l.law},
                {"checked", l.checked},
                {"passed", l.passed},
                {"failures", l.failures}};
        if (!l.passed) {
            jl["counterexample"] = l.counterexample;
            jl["straddleAttributable"] = l.failures_involve_loops;
        }
        laws.push_back(jl);
    }
    return Json{{"maxLeaves", r.max_leaves},
                {"maxLoops", r.max_loops},
                {"laws", laws},
                {"allPassed", r.all_passed()},
                {"failuresAllStraddleAttributable", r.failures_all_loop_attributable()}};
}

inline Json coeff_table_to_json(const CoeffTable& t) {
    Json entries = Json::array();
    for (auto& e : t.entries) {
        Json je{{"value", e.value.str()}, {"provenance", e.provenance}};
        if (e.handle)
            je["class"] = "handle";
        else
            je["class"] = Json{{"m", e.m}, {"i", e.i}};
        if (e.provenance == "brute-forced") {
            je["recursionCount"] = e.recursion_count.str();
            je["tensorCount"] = e.tensor_count.str();
            je["integralReciprocal"] = e.integral_reciprocal;
        }
        entries.push_back(je);
    }
    return Json{{"genus", t.g}, {"points", t.k}, {"mode", to_string(t.mode)}, {"entries", entries}};
}

inline Json identity_report_to_json(const CoproductIdentityReport& r) {
    Json classes = Json::array();
    for (auto& c : r.classes) {
        Json jc{{"coefficient", c.coefficient.str()},
                {"recursionCount", c.recursion_count.str()},
                {"tensorCount", c.tensor_count.str()},
                {"integralReciprocal", c.integral_reciprocal}};
        if (c.handle) {
            jc["class"] = "handle";
            jc["orbit"] = c.orbit;
        } else {
            jc["class"] = Json{{"m", c.m}, {"i", c.i}};
        }
        classes.push_back(jc);
    }
    Json j{{"genus", r.g},
           {"points", r.k},
           {"equal", r.equal},
           {"lhs", ratexpr_to_json(r.lhs)},
           {"rhs", ratexpr_to_json(r.rhs)},
           {"classes", classes},
           {"allReciprocalsIntegral", r.all_reciprocals_integral}};
    if (r.handle_present) {
        j["singleHandleCoefficientExists"] = r.single_handle_coefficient_exists;
        j["singleHandleRatio"] = r.single_handle_ratio.str();
    }
    return j;
}

}  // namespace hopftr
