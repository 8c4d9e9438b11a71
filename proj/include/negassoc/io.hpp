#pragma once

// JSON encodings of laws, process specifications, verdicts and reports.
// Parsers reject unknown fields and report the offending JSON path.

#include <string>

#include "json.hpp"

#include "negassoc/dependence.hpp"
#include "negassoc/laws.hpp"
#include "negassoc/multiaffine.hpp"
#include "negassoc/ordering.hpp"
#include "negassoc/pointproc.hpp"

namespace negassoc {

using Json = nlohmann::ordered_json;

/// Reads a JSON object field by field, tracking the path for diagnostics.
class JsonFields {
public:
    JsonFields(const Json& obj, std::string path);

    bool has(const std::string& key) const;
    const Json& required(const std::string& key);
    const Json* optional(const std::string& key);
    std::string path_of(const std::string& key) const;
    /// Throws a parse error naming every field that was never read.
    void reject_unknown() const;

    double number(const std::string& key);
    double number_or(const std::string& key, double fallback);
    long long integer(const std::string& key);
    long long integer_or(const std::string& key, long long fallback);
    std::string string(const std::string& key);
    std::vector<double> numbers(const std::string& key);

private:
    const Json& obj_;
    std::string path_;
    std::vector<std::string> seen_;
};

[[noreturn]] void parse_fail(const std::string& path, const std::string& what);
double as_number(const Json& j, const std::string& path);
long long as_integer(const Json& j, const std::string& path);
std::vector<double> as_numbers(const Json& j, const std::string& path);

/// Parses text, turning syntax errors into ErrorKind::parse with line/column.
Json parse_json_text(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);

// Laws and measures.
Json to_json(const Pmf& p);
Pmf pmf_from_json(const Json& j, const std::string& path = "pmf");
Json to_json(const TruncatedPmf& p);
Json to_json(const SubsetMeasure& m);
SubsetMeasure subset_measure_from_json(const Json& j, const std::string& path = "measure");
Json to_json(const JointPmf& law);
JointPmf joint_pmf_from_json(const Json& j, const std::string& path = "law");
Json to_json(const CountVectorLaw& law);

// Process specifications: {"type": "mixed"|"dpp"|"measure"|"law", ...}.
struct ProcessSpec {
    enum class Type { mixed, dpp, measure, law };
    Type type = Type::mixed;
    std::optional<MixedSampledProcess> mixed;
    std::optional<DppModel> dpp;
    std::optional<SubsetMeasure> measure;
    std::optional<JointPmf> law;

    /// Mixed or determinantal model; throws for measure and law specs.
    ProcessModel model() const;
};

/// tau spec: a plain probability array, or {"kind": ..., "params": {...}}
/// with kinds pmf, point, binomial, poisson_binomial, poisson, class_q,
/// geometric. Infinite-support kinds honour "mass_floor".
TruncatedPmf tau_from_json(const Json& j, const std::string& path = "tau");
ProcessSpec process_spec_from_json(const Json& j, const std::string& path = "process");

// Verdicts and reports.
Json to_json(const SequenceCheck& c);
Json to_json(const CxCheck& c);
Json to_json(const StabilityVerdict& v);
Json to_json(const DependenceVerdict& v);
Json to_json(const NqdCheck& v);
Json to_json(const BoundReport& r);
Json to_json(const SuperadditivityReport& r);
Json to_json(const DominationReport& r);
Json to_json(const DppDiagnostics& d);

const char* to_string(BoundReport::Status s);
const char* to_string(StabilityVerdict::Status s);
const char* to_string(DependenceVerdict::Status s);

}  // namespace negassoc
