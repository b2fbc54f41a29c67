#pragma once

#include "hopftr/json_io.hpp"

#include <CLI11.hpp>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hopftr {

struct CommandResult {
    enum class Status { Ok, Violation, Error };
    Status status = Status::Ok;
    Json payload = Json::object();
    std::vector<std::string> diagnostics;
    std::string text;  // --text rendering

    int exit_code() const {
        switch (status) {
            case Status::Ok: return 0;
            case Status::Violation: return 2;
            case Status::Error: return 1;
        }
        return 1;
    }

    Json envelope() const {
        const char* s = status == Status::Ok         ? "ok"
                        : status == Status::Violation ? "violation"
                                                      : "error";
        return Json{{"status", s}, {"payload", payload}, {"diagnostics", diagnostics}};
    }
};

namespace cli_detail {

inline CommandResult ok(Json payload, std::string text) {
    CommandResult r;
    r.payload = std::move(payload);
    r.text = std::move(text);
    return r;
}

inline CommandResult violation(Json payload, std::string text,
                               std::vector<std::string> diagnostics) {
    CommandResult r;
    r.status = CommandResult::Status::Violation;
    r.payload = std::move(payload);
    r.text = std::move(text);
    r.diagnostics = std::move(diagnostics);
    return r;
}

inline std::string axiom_report_text(const AxiomReport& rep) {
    std::ostringstream os;
    for (auto& l : rep.laws) {
        os << l.law << ": " << (l.passed ? "pass" : "FAIL") << " (" << l.checked << " checked";
        if (!l.passed)
            os << ", " << l.failures << " failures, first counterexample: " << l.counterexample
               << (l.failures_involve_loops ? " [straddle-attributable]" : " [loop-free]");
        os << ")\n";
    }
    return os.str();
}

}  // namespace cli_detail

/// Executes one subcommand. Exit codes: 0 ok, 2 violation (with at least one
/// counterexample in the payload), 1 error.
inline CommandResult run(const std::vector<std::string>& argv) {
    CLI::App app{"Exact Hopf-algebra and spectral-curve recursion toolkit"};
    app.require_subcommand(1);
    bool text_mode = false;
    app.add_flag("--text", text_mode, "plain-text output");

    // enumerate
    auto* cmd_enum = app.add_subcommand("enumerate", "list a graph family");
    std::string family;
    int opt_n = -1, opt_k = -1, opt_g = -1;
    cmd_enum->add_option("--family", family, "Y | X | Xbar | Xg | EO")->required();
    cmd_enum->add_option("--n", opt_n, "size parameter for Y/X/Xbar");
    cmd_enum->add_option("--k", opt_k, "free-leaf count for Xg/EO");
    cmd_enum->add_option("--g", opt_g, "loop count for Xg/EO");

    // product / coproduct / antipode
    auto* cmd_prod = app.add_subcommand("product", "star product of two graphs");
    std::vector<std::string> operands;
    cmd_prod->add_option("graphs", operands, "two bracket expressions")->expected(2);

    auto* cmd_cop = app.add_subcommand("coproduct", "coproduct of a graph");
    std::string cop_arg;
    bool reduced = false;
    cmd_cop->add_option("graph", cop_arg, "bracket expression")->required();
    cmd_cop->add_flag("--reduced", reduced, "drop the two trivial terms");

    auto* cmd_anti = app.add_subcommand("antipode", "antipode of a graph");
    std::string anti_arg;
    cmd_anti->add_option("graph", anti_arg, "bracket expression")->required();

    // verify-axioms
    auto* cmd_ax = app.add_subcommand("verify-axioms", "exhaustive law checks");
    int max_leaves = 4, max_loops = 0;
    cmd_ax->add_option("--max-leaves", max_leaves, "slot bound")->required();
    cmd_ax->add_option("--max-loops", max_loops, "loop bound")->required();

    // recursion / compare
    auto* cmd_rec = app.add_subcommand("recursion", "evaluate a correlation function");
    std::string curve_spec = "airy", mode = "direct";
    int genus = 0, points = 3;
    cmd_rec->add_option("--curve", curve_spec, "airy or y: c1,c3,...");
    cmd_rec->add_option("--genus", genus)->required();
    cmd_rec->add_option("--points", points)->required();
    cmd_rec->add_option("--mode", mode, "direct | graph-sum");

    auto* cmd_cmp = app.add_subcommand("compare", "direct recursion vs graph sum");
    std::string cmp_curve = "airy";
    int cmp_genus = 0, cmp_points = 3;
    cmd_cmp->add_option("--curve", cmp_curve);
    cmd_cmp->add_option("--genus", cmp_genus)->required();
    cmd_cmp->add_option("--points", cmp_points)->required();

    // coefficients / resolve-ambiguities
    auto* cmd_coeff = app.add_subcommand("coefficients", "splitting-identity coefficient table");
    std::string coeff_mode = "brute";
    int cg = 0, ck = 2;
    cmd_coeff->add_option("--genus", cg)->required();
    cmd_coeff->add_option("--points", ck, "number of non-root marked points")->required();
    cmd_coeff->add_option("--mode", coeff_mode, "statement | proof | brute");

    auto* cmd_amb = app.add_subcommand("resolve-ambiguities",
                                       "run the written-formula deciders");
    std::string amb_curve = "airy";
    cmd_amb->add_option("--curve", amb_curve);

    std::vector<const char*> cargs;
    cargs.push_back("hopftr");
    for (auto& a : argv) cargs.push_back(a.c_str());
    try {
        app.parse(int(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp&) {
        CommandResult r;
        r.text = app.help();
        r.payload = Json{{"help", app.help()}};
        return r;
    } catch (const CLI::ParseError& e) {
        CommandResult r;
        r.status = CommandResult::Status::Error;
        r.diagnostics = {std::string("usage error: ") + e.what()};
        r.text = r.diagnostics.front();
        return r;
    }

    try {
        if (*cmd_enum) {
            GraphFamilyId id;
            if (family == "Y") {
                id.kind = GraphFamilyId::Kind::Y;
                id.n = opt_n;
            } else if (family == "X") {
                id.kind = GraphFamilyId::Kind::X;
                id.n = opt_n;
            } else if (family == "Xbar") {
                id.kind = GraphFamilyId::Kind::Xbar;
                id.n = opt_n;
            } else if (family == "Xg") {
                id.kind = GraphFamilyId::Kind::Xg;
                id.k = opt_k;
                id.g = opt_g;
            } else if (family == "EO") {
                id.kind = GraphFamilyId::Kind::EO;
                id.k = opt_k;
                id.g = opt_g;
            } else {
                throw std::invalid_argument("unknown family '" + family + "'");
            }
            if ((family == "Xg" || family == "EO") && (opt_k < 0 || opt_g < 0))
                throw std::invalid_argument("Xg/EO need --k and --g");
            if (family != "Xg" && family != "EO" && opt_n < 0)
                throw std::invalid_argument(family + " needs --n");
            auto graphs = enumerate_family(id);
            Json names = Json::array();
            std::string text;
            for (auto& g : graphs) {
                names.push_back(g.key());
                text += g.key() + "\n";
            }
            std::string label = family == "Xg" || family == "EO"
                                    ? family + "(k=" + std::to_string(opt_k) +
                                          ",g=" + std::to_string(opt_g) + ")"
                                    : family + "(" + std::to_string(opt_n) + ")";
            return cli_detail::ok(
                Json{{"family", label}, {"count", graphs.size()}, {"graphs", names}}, text);
        }

        if (*cmd_prod) {
            Combo a = Combo::of(parse_graph(operands[0]));
            Combo b = Combo::of(parse_graph(operands[1]));
            Combo r = star(a, b);
            return cli_detail::ok(Json{{"result", combo_to_json(r)}, {"text", r.str()}}, r.str());
        }

        if (*cmd_cop) {
            Combo x = Combo::of(parse_graph(cop_arg));
            TensorCombo r = reduced ? reduced_coproduct(x) : coproduct(x);
            return cli_detail::ok(Json{{"result", tensor_to_json(r)}, {"text", r.str()}}, r.str());
        }

        if (*cmd_anti) {
            Combo r = antipode(Combo::of(parse_graph(anti_arg)));
            return cli_detail::ok(Json{{"result", combo_to_json(r)}, {"text", r.str()}}, r.str());
        }

        if (*cmd_ax) {
            AxiomReport rep = verify_axioms(max_leaves, max_loops);
            Json payload = axiom_report_to_json(rep);
            std::string text = cli_detail::axiom_report_text(rep);
            if (rep.all_passed()) return cli_detail::ok(std::move(payload), std::move(text));
            std::vector<std::string> diags;
            for (auto& l : rep.laws)
                if (!l.passed)
                    diags.push_back(l.law + " fails at: " + l.counterexample +
                                    (l.failures_involve_loops
                                         ? " (every failure involves loops: straddle-rule)"
                                         : " (loop-free failure)"));
            return cli_detail::violation(std::move(payload), std::move(text), std::move(diags));
        }

        if (*cmd_rec) {
            Evaluator ev(CurveModel::parse(curve_spec));
            Correlator w;
            if (mode == "direct")
                w = ev.w_direct(genus, points);
            else if (mode == "graph-sum")
                w = ev.w_graph_sum(genus, points);
            else
                throw std::invalid_argument("mode must be direct or graph-sum");
            return cli_detail::ok(Json{{"correlator", correlator_to_json(w)}, {"mode", mode}},
                                  correlator_text(w.value));
        }

        if (*cmd_cmp) {
            Evaluator ev(CurveModel::parse(cmp_curve));
            Correlator direct = ev.w_direct(cmp_genus, cmp_points);
            Correlator graph = ev.w_graph_sum(cmp_genus, cmp_points);
            bool equal = direct.value == graph.value;
            Json payload{{"direct", correlator_to_json(direct)},
                         {"graphSum", correlator_to_json(graph)},
                         {"equal", equal}};
            std::string text = "direct    = " + correlator_text(direct.value) +
                               "\ngraph-sum = " + correlator_text(graph.value) +
                               "\nequal: " + (equal ? "yes" : "NO") + "\n";
            if (equal) return cli_detail::ok(std::move(payload), std::move(text));
            return cli_detail::violation(std::move(payload), std::move(text),
                                         {"graph sum differs from the direct recursion"});
        }

        if (*cmd_coeff) {
            CoeffMode m = coeff_mode == "statement" ? CoeffMode::FormulaStatement
                          : coeff_mode == "proof"   ? CoeffMode::FormulaProof
                          : coeff_mode == "brute"   ? CoeffMode::BruteForced
                                                    : throw std::invalid_argument(
                                                          "mode must be statement|proof|brute");
            CoeffTable t = coeff_table(cg, ck, m);
            Json payload = coeff_table_to_json(t);
            std::ostringstream text;
            bool ok = true;
            for (auto& e : t.entries) {
                if (e.handle)
                    text << "b(handle) = " << e.value.str();
                else
                    text << "a(m=" << e.m << ",i=" << e.i << ") = " << e.value.str();
                if (m == CoeffMode::BruteForced) {
                    text << "  [rec " << e.recursion_count.str() << " / tensor "
                         << e.tensor_count.str() << "]";
                    if (!e.integral_reciprocal) {
                        text << "  NON-INTEGRAL RECIPROCAL";
                        ok = false;
                    }
                }
                text << "\n";
            }
            if (ok) return cli_detail::ok(std::move(payload), text.str());
            return cli_detail::violation(std::move(payload), text.str(),
                                         {"brute-forced reciprocal is not an integer"});
        }

        if (*cmd_amb) {
            CurveModel curve = CurveModel::parse(amb_curve);
            // k = 4 splitting-coefficient decider
            Rational brute_a = coeff_table(0, 4, CoeffMode::BruteForced).find(0, 2)->value;
            Rational st_a = a_formula_genus0(4, 2, CoeffMode::FormulaStatement);
            Rational pr_a = a_formula_genus0(4, 2, CoeffMode::FormulaProof);
            std::string a_verdict = brute_a == pr_a    ? "proof"
                                    : brute_a == st_a ? "statement"
                                                      : "neither";
            auto rep04 = verify_coproduct_identity(curve, 0, 4);

            // genus-2 handle-coefficient decider
            auto rep20 = verify_coproduct_identity(curve, 2, 0);
            Rational st_b = b_formula(2, 0, CoeffMode::FormulaStatement);
            Rational pr_b = b_formula(2, 0, CoeffMode::FormulaProof);
            std::string b_verdict =
                !rep20.single_handle_coefficient_exists ? "neither (per-orbit refinement required)"
                : rep20.single_handle_ratio == pr_b     ? "proof"
                : rep20.single_handle_ratio == st_b     ? "statement"
                                                        : "neither";
            Json payload{
                {"splitCoefficient",
                 Json{{"genus", 0},
                      {"points", 4},
                      {"i", 2},
                      {"bruteForced", brute_a.str()},
                      {"statement", st_a.str()},
                      {"proof", pr_a.str()},
                      {"verdict", a_verdict},
                      {"identityHolds", rep04.equal}}},
                {"handleCoefficient",
                 Json{{"genus", 2},
                      {"points", 0},
                      {"coarseRatio", rep20.single_handle_ratio.str()},
                      {"statement", st_b.str()},
                      {"proof", pr_b.str()},
                      {"singleCoefficientExists", rep20.single_handle_coefficient_exists},
                      {"verdict", b_verdict},
                      {"identityHoldsWithRefinedWeights", rep20.equal}}}};
            std::ostringstream text;
            text << "split coefficient (g=0,k=4,i=2): brute " << brute_a.str() << " vs statement "
                 << st_a.str() << " / proof " << pr_a.str() << " -> " << a_verdict
                 << "; identity " << (rep04.equal ? "holds" : "FAILS") << "\n";
            text << "handle coefficient (g=2,k=0): coarse ratio "
                 << rep20.single_handle_ratio.str() << " vs statement " << st_b.str() << " / proof "
                 << pr_b.str() << " -> " << b_verdict << "; identity with refined weights "
                 << (rep20.equal ? "holds" : "FAILS") << "\n";
            bool all_ok = rep04.equal && rep20.equal;
            if (all_ok) return cli_detail::ok(std::move(payload), text.str());
            return cli_detail::violation(std::move(payload), text.str(),
                                         {"a splitting identity failed to verify"});
        }
    } catch (const ParseError& e) {
        CommandResult r;
        r.status = CommandResult::Status::Error;
        r.diagnostics = {std::string("parse error: ") + e.what()};
        r.text = r.diagnostics.front();
        return r;
    } catch (const BoundError& e) {
        CommandResult r;
        r.status = CommandResult::Status::Error;
        r.diagnostics = {std::string("resource bound: ") + e.what()};
        r.text = r.diagnostics.front();
        return r;
    } catch (const std::exception& e) {
        CommandResult r;
        r.status = CommandResult::Status::Error;
        r.diagnostics = {e.what()};
        r.text = r.diagnostics.front();
        return r;
    }

    CommandResult r;
    r.status = CommandResult::Status::Error;
    r.diagnostics = {"no subcommand"};
    return r;
}

}  // namespace hopftr
