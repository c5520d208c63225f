#include "strata/cli.hpp"

#include <cstdlib>
#include <ostream>

#include <CLI11.hpp>

#include "strata/congruence.hpp"
#include "strata/errors.hpp"
#include "strata/io.hpp"
#include "strata/perturb.hpp"
#include "strata/reduction.hpp"
#include "strata/similarity_order.hpp"
#include "strata/tangent.hpp"
#include "strata/template.hpp"

namespace strata::cli {

double default_tolerance()
{
    const char* env = std::getenv("STRATA_TOL");
    if (!env || !*env)
        return kDefaultRankTol;
    char* end = nullptr;
    const double t = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(t > 0.0 && t < 1.0))
        throw InvalidArgument(std::string("STRATA_TOL must be a number in (0, 1), got '") + env + "'");
    return t;
}

namespace {

using nlohmann::json;

// symbolic labels a, b, c, ... become 0, 1, 2, ...
JordanType concrete(const JordanType& t)
{
    if (!t.has_symbolic_labels())
        return t;
    std::vector<cplx> values;
    for (int k = 0; k < 26; ++k)
        values.emplace_back(k, 0.0);
    return concretize(t, values);
}

Action parse_action(const std::string& s)
{
    if (s == "sim")
        return Action::Similarity;
    if (s == "congr")
        return Action::Congruence;
    return Action::StarCongruence;
}

json partition_json(const Partition& p) { return p.parts(); }

void emit(std::ostream& out, const json& doc) { out << rounded(doc).dump(2) << "\n"; }

struct Options {
    std::string matrix, jordan, lambda, action = "sim", kind = "classes", format = "json";
    std::string graph_kind, template_kind, form, pert, from, to, pattern;
    int n = 0, trials = 1000, max_iter = 50;
    bool nilpotent = false, upper = false;
    double eps = 1e-3, radius = 1e-6, tol = 0.0;
    std::uint64_t seed = 42;
};

int cmd_weyr(const Options& o, std::ostream& out)
{
    json doc;
    if (!o.matrix.empty()) {
        const CMatrix a = read_matrix_file(o.matrix);
        if (!o.lambda.empty()) {
            const cplx l = parse_complex(o.lambda);
            const WeyrChar w = numeric_weyr(a, l, o.tol);
            doc = {{"lambda", format_complex_exact(l)}, {"weyr", w.w}};
            doc["segre"] = w.empty() ? json::array() : partition_json(w.segre());
        } else {
            const JordanType t = jordan_type_numeric(a, o.radius, o.tol);
            doc["jordan"] = format_compact(t);
            doc["display"] = format_display(t);
            doc["labels"] = json::array();
            for (const auto& [label, part] : t.entries())
                doc["labels"].push_back({{"lambda", format_complex_exact(label.value())},
                                         {"weyr", weyr_of_partition(part).w},
                                         {"segre", partition_json(part)}});
        }
    } else {
        const JordanType t = parse_compact(o.jordan);
        doc["jordan"] = format_compact(t);
        doc["labels"] = json::array();
        for (const auto& [label, part] : t.entries()) {
            const std::string name = label.is_symbolic() ? greek_name(label.id()) : format_complex_exact(label.value());
            doc["labels"].push_back({{"lambda", name}, {"weyr", weyr_of_partition(part).w}, {"segre", partition_json(part)}});
        }
    }
    emit(out, doc);
    return Ok;
}

int cmd_codim(const Options& o, std::ostream& out)
{
    const Action action = parse_action(o.action);
    json doc{{"action", o.action}};
    CMatrix a;
    if (!o.matrix.empty()) {
        a = read_matrix_file(o.matrix);
    } else {
        if (action != Action::Similarity)
            throw InvalidArgument("--jordan works with --action sim only");
        const JordanType t = parse_compact(o.jordan);
        doc["jordan"] = format_compact(t);
        doc["codim_exact"] = orbit_codim(t);
        a = jordan_matrix(concrete(t));
    }
    const RankInfo r = tangent_rank(action, a, o.tol);
    if (r.ambiguous)
        throw NumericalAmbiguity("tangent rank is not clearly separated at tolerance " + format_double(o.tol));
    const int n = static_cast<int>(a.rows());
    const int ambient = action == Action::StarCongruence ? 2 * n * n : n * n;
    doc["n"] = n;
    doc["tangent_rank"] = r.rank;
    doc["codim"] = ambient - r.rank;
    emit(out, doc);
    return Ok;
}

std::vector<int> parse_pattern(const std::string& s)
{
    std::vector<int> p;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(part, &used);
            if (used != part.size() || v < 1)
                throw std::invalid_argument(part);
            p.push_back(v);
        } catch (const std::exception&) {
            throw InvalidArgument("--pattern expects positive integers separated by commas, got '" + s + "'");
        }
    }
    return p;
}

int cmd_graph(const Options& o, std::ostream& out)
{
    const bool dot = o.format == "dot";
    if (o.graph_kind == "sim" || o.graph_kind == "bundle") {
        ClosureGraph g = o.graph_kind == "bundle" ? build_bundle_graph(o.n)
                         : o.nilpotent            ? nilpotent_class_graph(o.n)
                                                  : build_class_graph(o.n, parse_pattern(o.pattern));
        if (dot)
            out << to_dot(g);
        else
            emit(out, to_json(g));
        return Ok;
    }
    const ParametricGraph g = o.graph_kind == "star"
                                  ? (o.n == 2 ? star_graph_2x2() : throw OutOfCatalog("*congruence closure graph exists for n = 2 only"))
                                  : congruence_graph(o.n, o.kind == "bundles" ? CongruenceGraphKind::Bundles
                                                                               : CongruenceGraphKind::Classes);
    if (dot)
        out << to_dot(g);
    else
        emit(out, to_json(g));
    return Ok;
}

int cmd_template(const Options& o, std::ostream& out)
{
    DeformationTemplate t = [&] {
        if (o.template_kind == "sim") {
            if (o.jordan.empty())
                throw InvalidArgument("template sim needs --jordan");
            return arnold_template(parse_compact(o.jordan));
        }
        if (o.form.empty())
            throw InvalidArgument("template " + o.template_kind + " needs --form");
        const bool star = o.template_kind == "star";
        const CanonicalForm f = parse_canonical(o.form, star);
        return star ? star_template(f) : congruence_template(f);
    }();
    if (o.format == "ascii")
        out << to_ascii(t);
    else
        emit(out, to_json(t));
    return Ok;
}

int cmd_reduce(const Options& o, std::ostream& out)
{
    const JordanType j = concrete(parse_compact(o.jordan));
    const CMatrix e = read_matrix_file(o.pert);
    ReductionOptions opt;
    if (o.tol > 0.0)
        opt.tol = o.tol;
    opt.max_iter = o.max_iter;
    const ReductionResult r = reduce_to_miniversal(j, e, opt);
    json doc{{"jordan", format_compact(j)},
             {"S", matrix_to_json(r.s)},
             {"D", matrix_to_json(r.d)},
             {"residual", r.pattern_residual},
             {"similarity_residual", r.similarity_residual},
             {"s_minus_identity", r.s_minus_identity},
             {"pattern_ok", r.pattern_ok},
             {"sweeps", {{"split", r.split_sweeps}, {"reduce", r.reduce_sweeps}}}};
    emit(out, doc);
    return Ok;
}

int cmd_classify(const Options& o, std::ostream& out)
{
    const CMatrix a = read_matrix_file(o.matrix);
    json doc{{"action", o.action}};
    if (o.action == "sim") {
        const JordanType t = jordan_type_numeric(a, o.radius, o.tol);
        doc["jordan"] = format_compact(t);
        doc["display"] = format_display(t);
        doc["bundle"] = format_display(canonical_bundle_labeling(t).type());
    } else if (o.action == "congr") {
        const CanonicalForm f = classify_congruence_small(a, o.tol);
        doc["form"] = format_canonical(f);
        doc["canonical"] = to_json(f);
    } else {
        throw InvalidArgument("classify supports --action sim or congr");
    }
    emit(out, doc);
    return Ok;
}

int cmd_survey(const Options& o, std::ostream& out)
{
    SurveyOptions opt;
    opt.kind = o.upper ? PerturbKind::StrictlyUpper : PerturbKind::Dense;
    opt.cluster_radius = o.radius;
    opt.tol = o.tol;
    emit(out, to_json(random_survey(concrete(parse_compact(o.jordan)), o.eps, o.trials, o.seed, opt)));
    return Ok;
}

int cmd_witness(const Options& o, std::ostream& out)
{
    const JordanType from = concrete(parse_compact(o.from));
    const JordanType to = concrete(parse_compact(o.to));
    json doc = to_json(arrow_realization_search(from, to, o.eps, o.tol));
    doc["from"] = format_compact(from);
    doc["to"] = format_compact(to);
    emit(out, doc);
    return Ok;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    return run(args, out, err);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Perturbation strata of complex matrices under similarity, congruence and *congruence", "strata"};
    app.require_subcommand(1);

    const auto positive = CLI::PositiveNumber;
    auto add_tol = [&](CLI::App* s) { s->add_option("--tol", o.tol, "rank tolerance in (0,1); default STRATA_TOL or 1e-8"); };

    auto* weyr = app.add_subcommand("weyr", "Weyr characteristics of a matrix or a compact Jordan type");
    auto* wm = weyr->add_option("--matrix", o.matrix, "matrix file")->check(CLI::ExistingFile);
    auto* wj = weyr->add_option("--jordan", o.jordan, "compact Jordan type");
    wm->excludes(wj);
    weyr->add_option("--lambda", o.lambda, "eigenvalue; omit to estimate the whole Jordan type")->needs(wm);
    weyr->add_option("--radius", o.radius, "eigenvalue cluster radius")->check(positive);
    add_tol(weyr);

    auto* codim = app.add_subcommand("codim", "orbit codimension from the tangent map");
    codim->add_option("--action", o.action)->check(CLI::IsMember({"sim", "congr", "star"}));
    auto* cm = codim->add_option("--matrix", o.matrix, "matrix file")->check(CLI::ExistingFile);
    auto* cj = codim->add_option("--jordan", o.jordan, "compact Jordan type (sim only)");
    cm->excludes(cj);
    add_tol(codim);

    auto* graph = app.add_subcommand("graph", "closure graph as JSON or DOT");
    graph->add_option("family", o.graph_kind, "sim | bundle | congr | star")
        ->required()
        ->check(CLI::IsMember({"sim", "bundle", "congr", "star"}));
    graph->add_option("--n", o.n, "matrix order")->required()->check(CLI::Range(1, kMaxGraphOrder));
    graph->add_flag("--nilpotent", o.nilpotent, "sim: single eigenvalue written as 0");
    graph->add_option("--pattern", o.pattern, "sim: label multiplicities, e.g. 2,1,1");
    graph->add_option("--kind", o.kind, "congr: classes | bundles")->check(CLI::IsMember({"classes", "bundles"}));
    graph->add_option("--format", o.format)->check(CLI::IsMember({"json", "dot"}));

    auto* tmpl = app.add_subcommand("template", "miniversal deformation template");
    tmpl->add_option("kind", o.template_kind, "sim | congr | star")
        ->required()
        ->check(CLI::IsMember({"sim", "congr", "star"}));
    tmpl->add_option("--jordan", o.jordan, "sim: compact Jordan type");
    tmpl->add_option("--form", o.form, "congr/star: canonical form such as \"H1(2) G1\"");
    tmpl->add_option("--format", o.format)->check(CLI::IsMember({"json", "ascii"}));

    auto* reduce = app.add_subcommand("reduce", "reduce J + E to the miniversal form of J");
    reduce->add_option("--jordan", o.jordan, "compact Jordan type; letters stand for 0, 1, 2, ...")->required();
    reduce->add_option("--pert", o.pert, "perturbation matrix file")->required()->check(CLI::ExistingFile);
    reduce->add_option("--tol", o.tol, "pattern tolerance")->check(positive);
    reduce->add_option("--max-iter", o.max_iter)->check(CLI::Range(1, 10000));

    auto* classify = app.add_subcommand("classify", "canonical form of a small matrix");
    classify->add_option("--matrix", o.matrix, "matrix file")->required()->check(CLI::ExistingFile);
    o.action = "sim";
    classify->add_option("--action", o.action)->check(CLI::IsMember({"sim", "congr"}));
    classify->add_option("--radius", o.radius, "eigenvalue cluster radius")->check(positive);
    add_tol(classify);

    auto* survey = app.add_subcommand("survey", "random perturbations checked against the bundle graph");
    survey->add_option("--jordan", o.jordan, "compact Jordan type; letters stand for 0, 1, 2, ...")->required();
    survey->add_option("--eps", o.eps)->check(CLI::NonNegativeNumber);
    survey->add_option("--trials", o.trials)->check(CLI::Range(1, 1000000));
    survey->add_option("--seed", o.seed);
    survey->add_flag("--upper", o.upper, "strictly upper triangular perturbations");
    survey->add_option("--radius", o.radius, "eigenvalue cluster radius")->check(positive);
    add_tol(survey);

    auto* witness = app.add_subcommand("witness", "sparse perturbation realizing a closure arrow");
    witness->add_option("--from", o.from)->required();
    witness->add_option("--to", o.to)->required();
    witness->add_option("--eps", o.eps)->check(positive);
    add_tol(witness);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Ok : Usage;
    }

    try {
        const bool is_reduce = reduce->parsed();
        if (o.tol == 0.0 && !is_reduce)
            o.tol = default_tolerance();
        else if (!is_reduce && !(o.tol > 0.0 && o.tol < 1.0))
            throw InvalidArgument("--tol must lie in (0, 1)");
        if ((weyr->parsed() || codim->parsed()) && o.matrix.empty() && o.jordan.empty())
            throw InvalidArgument("give --matrix or --jordan");
        if (weyr->parsed())
            return cmd_weyr(o, out);
        if (codim->parsed())
            return cmd_codim(o, out);
        if (graph->parsed())
            return cmd_graph(o, out);
        if (tmpl->parsed())
            return cmd_template(o, out);
        if (reduce->parsed())
            return cmd_reduce(o, out);
        if (classify->parsed())
            return cmd_classify(o, out);
        if (survey->parsed())
            return cmd_survey(o, out);
        return cmd_witness(o, out);
    } catch (const NumericalAmbiguity& e) {
        err << "strata: numerical ambiguity: " << e.what() << "\n";
        return Ambiguous;
    } catch (const SpectraOverlap& e) {
        err << "strata: numerical ambiguity: " << e.what() << "\n";
        return Ambiguous;
    } catch (const ReductionError& e) {
        err << "strata: reduction failed: " << e.what() << "\n";
        return Ambiguous;
    } catch (const OutOfCatalog& e) {
        err << "strata: out of catalog: " << e.what() << "\n";
        return Usage;
    } catch (const ParseError& e) {
        err << "strata: parse error: " << e.what() << "\n";
        return Usage;
    } catch (const Error& e) {
        err << "strata: " << e.what() << "\n";
        return Usage;
    }
}

} // namespace strata::cli
