// Python bindings. Structured values cross the boundary as JSON text, using
// the same encodings as the command-line reports.

#include <pybind11/gil_safe_call_once.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "negassoc/dependence.hpp"
#include "negassoc/harness.hpp"
#include "negassoc/io.hpp"

namespace py = pybind11;
using namespace negassoc;

namespace {

Json parse(const std::string& text, const char* what) { return parse_json_text(text, what); }

StabilityOptions stability_options(bool strong, std::size_t points, std::size_t lines, double tol,
                                   std::uint64_t seed) {
    StabilityOptions o = strong ? StabilityOptions::strongly_rayleigh_defaults() : StabilityOptions::rayleigh_defaults();
    o.points_per_pair = points;
    o.lines = lines;
    o.tol = tol;
    o.seed = seed;
    return o;
}

DependenceOptions dependence_options(double tol) {
    DependenceOptions o;
    o.tol = tol;
    return o;
}

}  // namespace

PYBIND11_MODULE(_negassoc, m) {
    m.doc() = "Negative dependence checks for finite point processes";

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
    error_type.call_once_and_store_result(
        [&]() { return py::object(py::exception<Error>(m, "NegassocError", PyExc_ValueError)); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const py::object& type = error_type.get_stored();
            py::object exc = type(std::string(to_string(e.kind())) + ": " + e.what());
            exc.attr("kind") = to_string(e.kind());
            PyErr_SetObject(type.ptr(), exc.ptr());
        }
    });

    m.def("poisson_binomial", [](const std::vector<double>& ps) {
        const Pmf p = poisson_binomial(ps);
        return std::vector<double>(p.probs().begin(), p.probs().end());
    });
    m.def("binomial", [](int n, double p) {
        const Pmf b = binomial(n, p);
        return std::vector<double>(b.probs().begin(), b.probs().end());
    });
    m.def("tau", [](const std::string& spec) { return to_json(tau_from_json(parse(spec, "tau"))).dump(); });
    m.def("is_ulc", [](const std::string& pmf) { return to_json(is_ulc(pmf_from_json(parse(pmf, "pmf")))).dump(); });
    m.def("is_pf2", [](const std::string& pmf) { return to_json(is_pf2(pmf_from_json(parse(pmf, "pmf")))).dump(); });
    m.def("cx_dominates", [](const std::string& p, const std::string& q) {
        return to_json(cx_dominates(pmf_from_json(parse(p, "p"), "p"), pmf_from_json(parse(q, "q"), "q"))).dump();
    });
    m.def("polarize", [](const std::string& pmf) { return to_json(polarize(pmf_from_json(parse(pmf, "pmf")))).dump(); });
    m.def("product_measure", [](const std::vector<double>& ps) { return to_json(product_measure(ps)).dump(); });
    m.def("is_rayleigh", [](const std::string& measure, std::size_t points, std::size_t lines, double tol,
                            std::uint64_t seed) {
        return to_json(is_rayleigh(subset_measure_from_json(parse(measure, "measure")),
                                   stability_options(false, points, lines, tol, seed)))
            .dump();
    });
    m.def("is_strongly_rayleigh", [](const std::string& measure, std::size_t points, std::size_t lines, double tol,
                                     std::uint64_t seed) {
        return to_json(is_strongly_rayleigh(subset_measure_from_json(parse(measure, "measure")),
                                            stability_options(true, points, lines, tol, seed)))
            .dump();
    });
    m.def("is_na", [](const std::string& law, double tol) {
        return to_json(is_na(joint_pmf_from_json(parse(law, "law")), dependence_options(tol))).dump();
    });
    m.def("is_sna", [](const std::string& law, double tol) {
        return to_json(is_sna(joint_pmf_from_json(parse(law, "law")), dependence_options(tol))).dump();
    });
    m.def("count_law", [](const std::string& process) {
        return to_json(count_law(process_spec_from_json(parse(process, "process")).model())).dump();
    });
    m.def("dominate", [](const std::string& process) {
        return to_json(poisson_domination_report(process_spec_from_json(parse(process, "process")).model())).dump();
    });
    m.def("run", [](const std::string& config) {
        const Report r = run(parse_config(parse(config, "config")));
        return py::make_tuple(report_json_text(r), report_csv_text(r), r.exit_status());
    });
}
