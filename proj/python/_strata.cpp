#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "strata/cli.hpp"
#include "strata/congruence.hpp"
#include "strata/errors.hpp"
#include "strata/perturb.hpp"
#include "strata/similarity_order.hpp"
#include "strata/structure.hpp"
#include "strata/tangent.hpp"
#include "strata/template.hpp"

namespace py = pybind11;
using namespace strata;

namespace {

Action action_of(const std::string& s)
{
    if (s == "sim")
        return Action::Similarity;
    if (s == "congr")
        return Action::Congruence;
    if (s == "star")
        return Action::StarCongruence;
    throw InvalidArgument("unknown action '" + s + "'");
}

JordanType concrete(const JordanType& t)
{
    if (!t.has_symbolic_labels())
        return t;
    std::vector<cplx> values;
    for (int k = 0; k < 26; ++k)
        values.emplace_back(k, 0.0);
    return concretize(t, values);
}

} // namespace

PYBIND11_MODULE(_strata, m)
{
    m.doc() = "orbit and bundle stratification of small matrices";

    // the base first so subclasses can derive from it on the Python side
    static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
    static py::exception<ParseError> parse(m, "ParseError", base.ptr());
    static py::exception<InvalidArgument> invalid(m, "InvalidArgument", base.ptr());
    static py::exception<OutOfCatalog> catalog(m, "OutOfCatalog", base.ptr());
    static py::exception<NumericalAmbiguity> ambiguity(m, "NumericalAmbiguity", base.ptr());
    static py::exception<SpectraOverlap> overlap(m, "SpectraOverlap", base.ptr());
    static py::exception<ReductionError> reduction(m, "ReductionError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const ParseError& e) {
            py::set_error(parse, e.what());
        } catch (const InvalidArgument& e) {
            py::set_error(invalid, e.what());
        } catch (const OutOfCatalog& e) {
            py::set_error(catalog, e.what());
        } catch (const NumericalAmbiguity& e) {
            py::set_error(ambiguity, e.what());
        } catch (const SpectraOverlap& e) {
            py::set_error(overlap, e.what());
        } catch (const ReductionError& e) {
            py::set_error(reduction, e.what());
        } catch (const Error& e) {
            py::set_error(base, e.what());
        }
    });

    m.def("orbit_codim", [](const std::string& t) { return orbit_codim(parse_compact(t)); }, py::arg("jordan"));
    m.def("orbit_dim", [](const std::string& t) { return orbit_dim(parse_compact(t)); }, py::arg("jordan"));
    m.def("display", [](const std::string& t) { return format_display(parse_compact(t)); }, py::arg("jordan"));
    m.def("closure_leq",
          [](const std::string& a, const std::string& b) { return closure_leq(parse_compact(a), parse_compact(b)); },
          py::arg("lower"), py::arg("upper"));
    m.def("jordan_matrix", [](const std::string& t) { return jordan_matrix(concrete(parse_compact(t))); },
          py::arg("jordan"));

    m.def("codim_numeric",
          [](const std::string& action, const CMatrix& a, double tol) { return codim_numeric(action_of(action), a, tol); },
          py::arg("action"), py::arg("matrix"), py::arg("tol") = kDefaultRankTol);
    m.def("jordan_type_numeric",
          [](const CMatrix& a, double radius, double tol) { return format_compact(jordan_type_numeric(a, radius, tol)); },
          py::arg("matrix"), py::arg("radius") = 1e-6, py::arg("tol") = kDefaultRankTol);

    m.def("_template_json", [](const std::string& t) { return to_json(arnold_template(parse_compact(t))).dump(); });
    m.def("_classify_json", [](const CMatrix& a, double tol) { return to_json(classify_congruence_small(a, tol)).dump(); },
          py::arg("matrix"), py::arg("tol") = kDefaultRankTol);
    m.def("_survey_json",
          [](const std::string& t, double eps, int trials, std::uint64_t seed, bool upper, double tol) {
              SurveyOptions opt;
              opt.kind = upper ? PerturbKind::StrictlyUpper : PerturbKind::Dense;
              opt.tol = tol;
              return to_json(random_survey(concrete(parse_compact(t)), eps, trials, seed, opt)).dump();
          },
          py::arg("jordan"), py::arg("eps"), py::arg("trials"), py::arg("seed"), py::arg("upper") = false,
          py::arg("tol") = kDefaultRankTol);
    m.def("_witness_json",
          [](const std::string& from, const std::string& to, double eps, double tol) {
              return to_json(arrow_realization_search(concrete(parse_compact(from)), concrete(parse_compact(to)), eps, tol))
                  .dump();
          },
          py::arg("from_"), py::arg("to"), py::arg("eps") = 1e-3, py::arg("tol") = kDefaultRankTol);

    // full command line, same output and exit codes as the executable
    m.def("run", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
