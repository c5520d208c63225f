// Exit gate: one PASS/FAIL line per acceptance criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "figures.hpp"
#include "strata/cli.hpp"
#include "strata/congruence.hpp"
#include "strata/perturb.hpp"
#include "strata/reduction.hpp"
#include "strata/similarity_order.hpp"
#include "strata/tangent.hpp"
#include "strata/template.hpp"

using namespace strata;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            notes.push_back("failed: " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

json cli_json(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    if (cli::run(args, out, err) != 0)
        throw std::runtime_error("cli failed: " + err.str());
    return json::parse(out.str());
}

figures::EdgeSet edges_from_json(const json& doc)
{
    figures::EdgeSet s;
    for (const auto& e : doc["edges"])
        s.emplace(doc["vertices"][e[0].get<int>()]["display"].get<std::string>(),
                  doc["vertices"][e[1].get<int>()]["display"].get<std::string>());
    return s;
}

std::set<std::pair<std::string, int>> dims_from_json(const json& doc)
{
    std::set<std::pair<std::string, int>> s;
    for (const auto& v : doc["vertices"])
        s.emplace(v["display"].get<std::string>(), v["dim"].get<int>());
    return s;
}

const cplx kI{0, 1};

Outcome criterion1()
{
    Outcome o;
    const json g4 = cli_json({"graph", "sim", "--n", "4", "--nilpotent", "--format", "json"});
    o.require(g4["vertices"].size() == 5 && edges_from_json(g4) == figures::nilpotent4, "4x4 nilpotent chain");

    const json g6 = cli_json({"graph", "sim", "--n", "6", "--nilpotent", "--format", "json"});
    o.require(g6["edges"].size() == 12, "6x6 nilpotent edge count 12");
    o.require(edges_from_json(g6) == figures::nilpotent6, "6x6 nilpotent edges");
    o.require(dims_from_json(g6) == figures::as_set(figures::nilpotent6_dims), "6x6 nilpotent dimensions");
    std::multiset<int> dims;
    for (const auto& v : g6["vertices"])
        dims.insert(v["dim"].get<int>());
    o.require(dims == std::multiset<int>{30, 28, 26, 24, 24, 22, 18, 18, 16, 10, 0}, "6x6 dimension annotations");
    o.note("6x6 nilpotent graph: " + std::to_string(g6["vertices"].size()) + " vertices, " +
           std::to_string(g6["edges"].size()) + " edges, one vertex per dimension label");

    const json g = cli_json({"graph", "sim", "--n", "4", "--format", "json"});
    o.require(g["vertices"].size() == 14 && g["edges"].size() == 9, "4x4 class graph size 14/9");
    o.require(edges_from_json(g) == figures::classes4, "4x4 class graph edges");
    o.require(dims_from_json(g) == figures::as_set(figures::classes4_dims), "4x4 class graph dimension levels");
    return o;
}

Outcome criterion2()
{
    Outcome o;
    const json g = cli_json({"graph", "bundle", "--n", "4", "--format", "json"});
    o.require(g["vertices"].size() == 14 && g["edges"].size() == 20, "bundle graph size 14/20");
    o.require(edges_from_json(g) == figures::bundles4, "bundle graph edges");
    o.require(dims_from_json(g) == figures::as_set(figures::bundles4_dims), "bundle dimensions");
    const auto e = edges_from_json(g);
    o.require(e.count({"λ²λλ", "λλλμ"}) == 1, "edge λ²λλ→λλλμ");
    o.require(e.count({"λ⁴", "λ²μ²"}) == 1, "edge λ⁴→λ²μ²");
    const ClosureGraph bg = build_bundle_graph(4);
    o.require(e.count({"λ³λ", "λλλμ"}) == 0 && !bg.reachable(*bg.find("a^3 a"), *bg.find("a a a b")),
              "no arrow λ³λ→λλλμ");
    return o;
}

Outcome criterion3()
{
    Outcome o;
    const std::vector<EigLabel> labels{EigLabel::concrete(0.0), EigLabel::concrete(1.0), EigLabel::concrete({2, 1})};
    int count = 0;
    for (int n = 1; n <= 5; ++n)
        for (const JordanType& t : enumerate_jordan_types(n, labels)) {
            const int a = orbit_codim(t);
            const int b = star_count(arnold_template(t));
            const int c = similarity_codim_numeric(jordan_matrix(t));
            o.require(a == b && b == c, format_compact(t) + ": " + std::to_string(a) + "/" + std::to_string(b) + "/" +
                                            std::to_string(c));
            ++count;
        }
    const JordanType ex = parse_compact("a^2 a b");
    o.require(orbit_codim(ex) == 6 && star_count(arnold_template(ex)) == 6 &&
                  similarity_codim_numeric(jordan_matrix(concretize(ex, {0.0, 1.0}))) == 6,
              "spot value λ²λμ → 6");
    o.note(std::to_string(count) + " Jordan types checked");
    return o;
}

Outcome criterion4()
{
    Outcome o;
    int count = 0;
    for (cplx lambda : {cplx(2, 0), cplx(3, 1), cplx(0.5, 0), cplx(0, 2)})
        for (int n : {2, 3})
            for (const CanonicalForm& f : congruence_catalog(n, lambda)) {
                const int stars = star_count(congruence_template(f));
                const int codim = congruence_codim_numeric(canonical_matrix(f));
                o.require(stars == codim, format_canonical(f));
                ++count;
            }
    CMatrix h(2, 2);
    h << 0.0, 1.0, 2.0, 0.0;
    o.require(congruence_codim_numeric(h) == 1 &&
                  star_count(congruence_template(parse_canonical("H1(2)", false))) == 1,
              "[[0,1],[λ,0]] → 1");
    o.require(congruence_codim_numeric(CMatrix::Zero(2, 2)) == 4 &&
                  star_count(congruence_template(parse_canonical("N1 N1", false))) == 4,
              "0₂ → 4");
    o.require(congruence_codim_numeric(CMatrix::Zero(3, 3)) == 9 &&
                  star_count(congruence_template(parse_canonical("N1 N1 N1", false))) == 9,
              "0₃ → 9");
    o.note(std::to_string(count) + " table entries checked");
    return o;
}

Outcome criterion5()
{
    Outcome o;
    const std::vector<cplx> mus{1.0, -1.0, kI, std::polar(1.0, M_PI / 3)};
    int count = 0;
    for (cplx lambda : {cplx(0.3, 0), cplx(0, 0.5)})
        for (cplx a : mus)
            for (cplx b : mus)
                for (cplx c : mus)
                    for (int n : {2, 3})
                        for (const CanonicalForm& f : star_catalog(n, {a, b, c}, lambda)) {
                            const int params = real_parameter_count(star_template(f));
                            const int codim = star_congruence_codim_numeric(canonical_matrix(f));
                            o.require(params == codim, format_canonical(f) + ": " + std::to_string(params) + " vs " +
                                                           std::to_string(codim));
                            ++count;
                        }
    for (cplx tau : mus) {
        const CanonicalForm u = parse_canonical("U2(1)", true);
        CanonicalForm ut = u;
        ut.blocks[0].param = tau;
        o.require(real_parameter_count(star_template(ut)) == 2 && star_congruence_codim_numeric(canonical_matrix(ut)) == 2,
                  "U(2,τ) → 2");
    }
    const ParametricGraph g = star_graph_2x2();
    const Family& uf = g.families()[*g.find("U2(t)")];
    o.require(uf.dimension == 6 && 8 - star_congruence_codim_numeric(uf.matrix(uf.sample_params)) + uf.moduli == 6,
              "Figure 6 U(2,τ) family dimension 6 = 8 − 2");
    // a lone ε on the middle diagonal entry of U(3,μ) covers one real direction out of three
    const CanonicalForm u3 = parse_canonical("U3(1)", true);
    o.note("U3 entry: " + std::to_string(real_parameter_count(star_template(u3))) + " real parameters, numeric codimension " +
           std::to_string(star_congruence_codim_numeric(canonical_matrix(u3))) +
           "; a single ε at (2,2) would give 1, so the entry carries a star at (1,1) as well");
    o.note(std::to_string(count) + " table entries checked");
    return o;
}

CMatrix random_e(int n, std::mt19937_64& rng, double norm)
{
    std::normal_distribution<double> g;
    CMatrix e(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            e(i, j) = cplx(g(rng), g(rng));
    return e * (norm / e.norm());
}

Outcome criterion6()
{
    Outcome o;
    std::mt19937_64 rng(2024);
    double worst_pattern = 0.0, worst_sim = 0.0, worst_ratio = 0.0;
    const std::vector<JordanType> js{parse_compact("(0)^3 (0)^2"), parse_compact("(0)^3 (0)^2 (1)"),
                                     parse_compact("(0)^2 (0) (1)")};
    for (const JordanType& j : js)
        for (int k = 0; k < 100; ++k) {
            const CMatrix e = random_e(j.order(), rng, 1e-4);
            try {
                const ReductionResult r = reduce_to_miniversal(j, e);
                worst_pattern = std::max(worst_pattern, r.pattern_residual);
                worst_sim = std::max(worst_sim, r.similarity_residual);
                worst_ratio = std::max(worst_ratio, r.s_minus_identity / e.norm());
                o.require(r.pattern_residual <= 1e-8, format_compact(j) + " pattern residual");
                o.require(r.similarity_residual <= 1e-10, format_compact(j) + " similarity certificate");
                o.require(r.s_minus_identity <= 100.0 * e.norm(), format_compact(j) + " ‖S−I‖");
            } catch (const std::exception& ex) {
                o.require(false, format_compact(j) + ": " + ex.what());
            }
        }
    char buf[200];
    std::snprintf(buf, sizeof buf, "worst pattern residual %.2e, similarity residual %.2e, ‖S−I‖/‖E‖ %.2f", worst_pattern,
                  worst_sim, worst_ratio);
    o.note(buf);
    return o;
}

Outcome criterion7()
{
    Outcome o;
    for (cplx lambda : {cplx(0, 0), cplx(1, 0)})
        for (double eps : {1e-3, 1e-5}) {
            CMatrix a = jordan_matrix(concretize(parse_compact("a^2 a^2"), {lambda}));
            a(1, 3) = eps;
            o.require(numeric_weyr(a, lambda, 1e-8).w == std::vector<int>{2, 1, 1}, "e24 → J3⊕J1");
            a(1, 3) = 0.0;
            a(1, 2) = eps;
            o.require(numeric_weyr(a, lambda, 1e-8).w == std::vector<int>{1, 1, 1, 1}, "e23 → J4");
        }
    return o;
}

Outcome criterion8()
{
    Outcome o;
    const ParametricGraph g = star_graph_2x2();
    auto at = [&](const char* s) { return g.parse_instance(s); };
    o.require(!g.has_arrow(at("diag(l,0)@1"), at("U2(t)@i")), "diag(1,0)→U(2,i) false");
    o.require(g.has_arrow(at("diag(l,0)@1"), at("U2(t)@1")), "diag(1,0)→U(2,1) true");
    o.require(g.has_arrow(at("diag(l,-l)@i"), at("U2(t)@i")), "diag(i,−i)→U(2,i) true");
    o.require(g.has_arrow(at("diag(l,0)@1"), at("diag(l,l)@1")), "diag(1,0)→diag(1,1) true");
    o.require(!g.has_arrow(at("diag(l,0)@1"), at("diag(l,l)@i")), "diag(1,0)→diag(i,i) false");
    const Instance target{*g.find("diag(m,n)"), {std::polar(1.0, M_PI / 4), std::polar(1.0, -M_PI / 4)}};
    o.require(g.has_arrow(at("diag(l,0)@1"), target), "diag(1,0)→diag(μ,ν) cone condition true");
    return o;
}

Outcome criterion9()
{
    Outcome o;
    const std::vector<EigLabel> labels{EigLabel::concrete(0.0), EigLabel::concrete(1.0), EigLabel::concrete(2.0),
                                       EigLabel::concrete(3.0)};
    int types = 0, violations = 0;
    for (const JordanType& t : enumerate_jordan_types(4, labels)) {
        const PerturbReport r = random_survey(t, 1e-3, 1000, 42);
        ++types;
        violations += r.violation_count();
        if (!r.passed())
            o.require(false, format_compact(t) + ": " + std::to_string(r.violation_count()) + " violations (" +
                                 r.trials.front().reason + ")");
    }
    o.note(std::to_string(types) + " Jordan types, 1000 trials each, " + std::to_string(violations) + " violations");
    return o;
}

Outcome criterion10()
{
    Outcome o;
    for (int n : {4, 6}) {
        const ClosureGraph g = nilpotent_class_graph(n);
        int singles = 0;
        std::vector<std::string> pairs;
        for (const auto& [a, b] : g.edges()) {
            const Witness w = arrow_realization_search(g.vertices()[a].type, g.vertices()[b].type);
            const std::string edge = g.vertices()[a].display + "→" + g.vertices()[b].display;
            o.require(w.found, "witness for " + edge);
            if (w.found && w.entries.size() == 1)
                ++singles;
            else if (w.found)
                pairs.push_back(edge);
        }
        std::string msg = std::to_string(n) + "x" + std::to_string(n) + ": " + std::to_string(singles) + "/" +
                          std::to_string(g.edges().size()) + " edges with single-entry witnesses";
        if (!pairs.empty()) {
            msg += "; two-entry:";
            for (const auto& p : pairs)
                msg += " " + p;
        }
        o.note(msg);
    }
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"similarity class graphs match the reference graphs", criterion1},
        {"similarity bundle graph matches the reference graph", criterion2},
        {"codimension triple agreement up to order 5", criterion3},
        {"congruence tables agree with numeric codimension", criterion4},
        {"*congruence tables agree with numeric real codimension", criterion5},
        {"reduction engine residuals and near-identity transforms", criterion6},
        {"instability example Weyr characteristics", criterion7},
        {"2x2 *congruence arrow predicates", criterion8},
        {"bundle survey soundness for 4x4 types", criterion9},
        {"arrow witnesses for nilpotent covering edges", criterion10},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.notes.push_back(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        char head[64];
        std::snprintf(head, sizeof head, "%s %2zu (%.2fs) ", o.pass ? "PASS" : "FAIL", k + 1, secs);
        std::cout << head << criteria[k].first << "\n";
        for (const auto& n : o.notes)
            std::cout << "        " << n << "\n";
        if (!o.pass)
            ++failures;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
    return failures == 0 ? 0 : 1;
}
