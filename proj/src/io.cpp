#include "negassoc/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "negassoc/error.hpp"

namespace negassoc {

void parse_fail(const std::string& path, const std::string& what) {
    fail(ErrorKind::parse, path + ": " + what);
}

double as_number(const Json& j, const std::string& path) {
    if (!j.is_number()) parse_fail(path, "expected a number");
    return j.get<double>();
}

long long as_integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) parse_fail(path, "expected an integer");
    return j.get<long long>();
}

std::vector<double> as_numbers(const Json& j, const std::string& path) {
    if (!j.is_array()) parse_fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

JsonFields::JsonFields(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) parse_fail(path_, "expected an object");
}

std::string JsonFields::path_of(const std::string& key) const { return path_ + "." + key; }

bool JsonFields::has(const std::string& key) const { return obj_.contains(key); }

const Json& JsonFields::required(const std::string& key) {
    if (!obj_.contains(key)) parse_fail(path_of(key), "required field is missing");
    seen_.push_back(key);
    return obj_.at(key);
}

const Json* JsonFields::optional(const std::string& key) {
    if (!obj_.contains(key)) return nullptr;
    seen_.push_back(key);
    return &obj_.at(key);
}

void JsonFields::reject_unknown() const {
    for (const auto& [key, value] : obj_.items())
        if (std::find(seen_.begin(), seen_.end(), key) == seen_.end())
            parse_fail(path_of(key), "unknown field");
}

double JsonFields::number(const std::string& key) { return as_number(required(key), path_of(key)); }

double JsonFields::number_or(const std::string& key, double fallback) {
    const Json* j = optional(key);
    return j ? as_number(*j, path_of(key)) : fallback;
}

long long JsonFields::integer(const std::string& key) { return as_integer(required(key), path_of(key)); }

long long JsonFields::integer_or(const std::string& key, long long fallback) {
    const Json* j = optional(key);
    return j ? as_integer(*j, path_of(key)) : fallback;
}

std::string JsonFields::string(const std::string& key) {
    const Json& j = required(key);
    if (!j.is_string()) parse_fail(path_of(key), "expected a string");
    return j.get<std::string>();
}

std::vector<double> JsonFields::numbers(const std::string& key) {
    return as_numbers(required(key), path_of(key));
}

Json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // The library message carries "at line L, column C".
        fail(ErrorKind::parse, source + ": " + e.what());
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::parse, path + ": cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path);
}

Json to_json(const Pmf& p) {
    return Json{{"n", p.bound()}, {"probs", std::vector<double>(p.probs().begin(), p.probs().end())}};
}

Pmf pmf_from_json(const Json& j, const std::string& path) {
    std::vector<double> probs;
    if (j.is_array()) {
        probs = as_numbers(j, path);
    } else {
        JsonFields f(j, path);
        probs = f.numbers("probs");
        if (const Json* n = f.optional("n")) {
            const long long bound = as_integer(*n, f.path_of("n"));
            if (bound < 0 || static_cast<std::size_t>(bound) + 1 < probs.size())
                parse_fail(f.path_of("n"), "bound is smaller than the probability list");
            probs.resize(static_cast<std::size_t>(bound) + 1, 0.0);
        }
        f.reject_unknown();
    }
    try {
        return Pmf(std::move(probs), true);
    } catch (const Error& e) {
        parse_fail(path, e.what());
    }
}

Json to_json(const TruncatedPmf& p) {
    Json j = to_json(p.pmf);
    j["truncation_point"] = p.truncation_point;
    j["retained_mass"] = p.retained_mass;
    return j;
}

Json to_json(const SubsetMeasure& m) {
    Json entries = Json::array();
    for (SubsetMeasure::Mask s = 0; s < m.size(); ++s)
        if (m[s] != 0.0) entries.push_back(Json::array({s, m[s]}));
    Json j{{"n", m.n()}, {"entries", entries}};
    if (m.mode() == SubsetMeasure::Mode::polynomial) j["mode"] = "polynomial";
    return j;
}

SubsetMeasure subset_measure_from_json(const Json& j, const std::string& path) {
    JsonFields f(j, path);
    const long long n = f.integer("n");
    if (n < 0 || n > kMaxGroundSet) parse_fail(f.path_of("n"), "ground set size must lie in [0, 20]");
    const Json& entries = f.required("entries");
    if (!entries.is_array()) parse_fail(f.path_of("entries"), "expected an array of [bitmask, weight]");
    std::vector<std::pair<SubsetMeasure::Mask, double>> pairs;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string p = f.path_of("entries") + "[" + std::to_string(i) + "]";
        const Json& e = entries[i];
        if (!e.is_array() || e.size() != 2) parse_fail(p, "expected [bitmask, weight]");
        const long long mask = as_integer(e[0], p + "[0]");
        if (mask < 0 || mask >= (1LL << n)) parse_fail(p + "[0]", "bitmask outside the ground set");
        pairs.emplace_back(static_cast<SubsetMeasure::Mask>(mask), as_number(e[1], p + "[1]"));
    }
    bool polynomial = false;
    if (const Json* mode = f.optional("mode")) {
        if (!mode->is_string() || (*mode != "probability" && *mode != "polynomial"))
            parse_fail(f.path_of("mode"), "expected \"probability\" or \"polynomial\"");
        polynomial = *mode == "polynomial";
    }
    f.reject_unknown();
    try {
        return SubsetMeasure::from_entries(static_cast<int>(n), pairs,
                                           polynomial ? SubsetMeasure::Mode::polynomial
                                                      : SubsetMeasure::Mode::probability);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::guard_exceeded) throw;
        parse_fail(path, e.what());
    }
}

Json to_json(const JointPmf& law) {
    Json atoms = Json::array();
    for (std::size_t a = 0; a < law.size(); ++a) {
        const auto x = law.point(a);
        atoms.push_back(Json::array({std::vector<double>(x.begin(), x.end()), law.prob(a)}));
    }
    return Json{{"dim", law.dim()}, {"atoms", atoms}};
}

JointPmf joint_pmf_from_json(const Json& j, const std::string& path) {
    JsonFields f(j, path);
    const long long dim = f.integer("dim");
    if (dim < 1) parse_fail(f.path_of("dim"), "dimension must be positive");
    const Json& atoms = f.required("atoms");
    if (!atoms.is_array()) parse_fail(f.path_of("atoms"), "expected an array of [point, probability]");
    std::vector<JointPmf::Point> support;
    std::vector<double> probs;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const std::string p = f.path_of("atoms") + "[" + std::to_string(i) + "]";
        const Json& a = atoms[i];
        if (!a.is_array() || a.size() != 2) parse_fail(p, "expected [point, probability]");
        support.push_back(as_numbers(a[0], p + "[0]"));
        probs.push_back(as_number(a[1], p + "[1]"));
    }
    // Count-law output carries this; accept it so laws round-trip.
    if (const Json* t = f.optional("truncation_mass")) as_number(*t, f.path_of("truncation_mass"));
    f.reject_unknown();
    try {
        return JointPmf(static_cast<std::size_t>(dim), std::move(support), std::move(probs));
    } catch (const Error& e) {
        parse_fail(path, e.what());
    }
}

Json to_json(const CountVectorLaw& law) {
    Json j = to_json(law.law);
    j["truncation_mass"] = law.truncation_mass;
    return j;
}

ProcessModel ProcessSpec::model() const {
    if (mixed) return *mixed;
    if (dpp) return *dpp;
    fail(ErrorKind::precondition, "process spec is not a mixed or determinantal process");
}

TruncatedPmf tau_from_json(const Json& j, const std::string& path) {
    if (j.is_array()) return {pmf_from_json(j, path), 0, 1.0};
    JsonFields f(j, path);
    const std::string kind = f.string("kind");
    const Json* params_json = f.optional("params");
    const Json empty = Json::object();
    JsonFields params(params_json ? *params_json : empty, f.path_of("params"));
    const double floor = params.number_or("mass_floor", kDefaultMassFloor);
    f.reject_unknown();

    TruncatedPmf out;
    try {
        if (kind == "pmf") {
            out.pmf = pmf_from_json(params.required("probs"), params.path_of("probs"));
        } else if (kind == "point") {
            out.pmf = Pmf::point_mass(static_cast<int>(params.integer("k")));
        } else if (kind == "binomial") {
            out.pmf = binomial(static_cast<int>(params.integer("n")), params.number("p"));
        } else if (kind == "poisson_binomial") {
            out.pmf = poisson_binomial(params.numbers("ps"));
        } else if (kind == "poisson") {
            out = truncated_poisson(params.number("lambda"), floor);
        } else if (kind == "class_q") {
            std::vector<double> ps;
            if (params.has("ps")) ps = params.numbers("ps");
            out = class_q_pmf(params.number("lambda"), ps, floor);
        } else if (kind == "geometric") {
            out = truncated_geometric(params.number("p"), floor);
        } else {
            parse_fail(f.path_of("kind"), "unknown tau kind \"" + kind + "\"");
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::parse || e.kind() == ErrorKind::guard_exceeded) throw;
        parse_fail(path, e.what());
    }
    if (kind != "poisson" && kind != "class_q" && kind != "geometric")
        out.truncation_point = out.pmf.bound();
    params.reject_unknown();
    return out;
}

ProcessSpec process_spec_from_json(const Json& j, const std::string& path) {
    JsonFields f(j, path);
    const std::string type = f.string("type");
    ProcessSpec spec;
    if (type == "mixed") {
        spec.type = ProcessSpec::Type::mixed;
        const TruncatedPmf tau = tau_from_json(f.required("tau"), f.path_of("tau"));
        std::vector<double> q = f.numbers("partition");
        try {
            spec.mixed = MixedSampledProcess{tau.pmf, PartitionModel(std::move(q)), tau.retained_mass};
        } catch (const Error& e) {
            parse_fail(f.path_of("partition"), e.what());
        }
    } else if (type == "dpp") {
        spec.type = ProcessSpec::Type::dpp;
        const Json& kernel = f.required("kernel");
        if (!kernel.is_array()) parse_fail(f.path_of("kernel"), "expected a square matrix");
        const auto n = static_cast<Eigen::Index>(kernel.size());
        Eigen::MatrixXd k(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            const std::string rp = f.path_of("kernel") + "[" + std::to_string(r) + "]";
            const auto row = as_numbers(kernel[static_cast<std::size_t>(r)], rp);
            if (static_cast<Eigen::Index>(row.size()) != n) parse_fail(rp, "row length differs from row count");
            for (Eigen::Index c = 0; c < n; ++c) k(r, c) = row[static_cast<std::size_t>(c)];
        }
        std::vector<int> cells;
        if (const Json* c = f.optional("cells")) {
            for (double v : as_numbers(*c, f.path_of("cells"))) cells.push_back(static_cast<int>(v));
        } else {
            for (Eigen::Index i = 0; i < n; ++i) cells.push_back(static_cast<int>(i));
        }
        if (static_cast<Eigen::Index>(cells.size()) != n)
            parse_fail(f.path_of("cells"), "one cell label per ground point is required");
        spec.dpp = DppModel{std::move(k), std::move(cells)};
    } else if (type == "measure") {
        spec.type = ProcessSpec::Type::measure;
        Json copy = j;
        copy.erase("type");
        spec.measure = subset_measure_from_json(copy, path);
        return spec;
    } else if (type == "law") {
        spec.type = ProcessSpec::Type::law;
        Json copy = j;
        copy.erase("type");
        spec.law = joint_pmf_from_json(copy, path);
        return spec;
    } else {
        parse_fail(f.path_of("type"), "expected mixed, dpp, measure or law");
    }
    f.reject_unknown();
    return spec;
}

const char* to_string(BoundReport::Status s) { return s == BoundReport::Status::holds ? "holds" : "violated"; }

const char* to_string(StabilityVerdict::Status s) {
    return s == StabilityVerdict::Status::violated ? "violated" : "no-violation-found";
}

const char* to_string(DependenceVerdict::Status s) {
    return s == DependenceVerdict::Status::holds ? "holds" : "violated";
}

Json to_json(const SequenceCheck& c) {
    Json j{{"holds", c.holds}};
    j["first_violation"] = c.first_violation ? Json(*c.first_violation) : Json(nullptr);
    return j;
}

Json to_json(const CxCheck& c) {
    Json j{{"holds", c.holds}, {"mean_gap", c.mean_gap}, {"min_stop_loss_gap", c.min_stop_loss_gap}};
    j["witness"] = c.witness ? Json(*c.witness) : Json(nullptr);
    return j;
}

Json to_json(const StabilityVerdict& v) {
    Json j{{"status", to_string(v.status)},
           {"grid_trials", v.grid_trials},
           {"line_trials", v.line_trials},
           {"ambiguous_trials", v.ambiguous_trials}};
    if (v.pair_witness) {
        const auto& w = *v.pair_witness;
        j["witness"] = Json{{"kind", "rayleigh"}, {"x", w.x}, {"i", w.i}, {"j", w.j},
                            {"slack", w.slack}, {"verified_slack", w.verified_slack}};
    } else if (v.line_witness) {
        const auto& w = *v.line_witness;
        j["witness"] = Json{{"kind", "line"}, {"a", w.a}, {"b", w.b}, {"coefficients", w.coefficients},
                            {"distinct_real_roots", w.distinct_real},
                            {"distinct_roots", w.distinct_total}};
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

Json to_json(const DependenceVerdict& v) {
    Json j{{"status", to_string(v.status)},
           {"pairs_checked", v.pairs_checked},
           {"max_value", v.max_value},
           {"margin_warning", v.margin_warning}};
    if (v.witness) {
        const auto& w = *v.witness;
        Json wj{{"block_a", w.block_a}, {"block_b", w.block_b}};
        wj["threshold"] = w.threshold ? Json(*w.threshold) : Json(nullptr);
        wj["up_set_a"] = w.up_set_a;
        wj["up_set_b"] = w.up_set_b;
        if (!w.point.empty()) wj["point"] = w.point;
        wj["value"] = w.value;
        j["witness"] = wj;
    } else {
        j["witness"] = nullptr;
    }
    return j;
}

Json to_json(const NqdCheck& v) {
    Json j{{"holds", v.holds}, {"excess", v.excess}};
    j["witness"] = v.witness ? Json(*v.witness) : Json(nullptr);
    return j;
}

Json to_json(const BoundReport& r) {
    Json ctx = Json::object();
    for (const auto& [k, v] : r.context) ctx[k] = v;
    return Json{{"name", r.name}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"slack", r.slack},
                {"status", to_string(r.status)}, {"context", ctx}};
}

Json to_json(const SuperadditivityReport& r) {
    return Json{{"void_product", to_json(r.void_product)},
                {"min_phi_gap", r.min_phi_gap},
                {"grid_points", r.grid_points},
                {"phi_superadditive", r.phi_superadditive}};
}

Json to_json(const DominationReport& r) {
    Json cx = Json::array();
    for (const auto& c : r.cx) {
        Json e = to_json(c.result);
        e["cells"] = c.cells;
        e["mean"] = c.mean;
        cx.push_back(e);
    }
    Json voids = Json::array();
    for (const auto& v : r.void_bounds) voids.push_back(to_json(v));
    Json lap = Json::array();
    for (const auto& v : r.laplace) lap.push_back(to_json(v));
    return Json{{"pass", r.pass()},
                {"intensity", r.intensity},
                {"truncation_mass", r.truncation_mass},
                {"cx", cx},
                {"void", voids},
                {"moment", to_json(r.moment)},
                {"laplace", lap}};
}

Json to_json(const DppDiagnostics& d) {
    return Json{{"pass", d.pass()},
                {"symmetry_defect", d.symmetry_defect},
                {"min_eigenvalue", d.min_eigenvalue},
                {"max_eigenvalue", d.max_eigenvalue},
                {"eigenvalues", d.eigenvalues},
                {"failures", d.failures}};
}

}  // namespace negassoc
