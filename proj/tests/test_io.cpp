#include "doctest.h"

#include <string>

#include "negassoc/error.hpp"
#include "negassoc/io.hpp"

using namespace negassoc;

namespace {

std::string parse_message(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::parse);
        return e.what();
    }
    FAIL("no parse error");
    return "";
}

bool mentions(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("pmf round trip") {
    const Pmf p({0.25, 0.5, 0.25});
    const Pmf back = pmf_from_json(to_json(p));
    CHECK(std::vector<double>(back.probs().begin(), back.probs().end()) ==
          std::vector<double>(p.probs().begin(), p.probs().end()));
    CHECK(pmf_from_json(Json::array({0.5, 0.5})).bound() == 1);
    const Pmf padded = pmf_from_json(Json{{"probs", {1.0}}, {"n", 3}});
    CHECK(padded.bound() == 3);
    CHECK(padded[3] == 0.0);
    CHECK(mentions(parse_message([] { pmf_from_json(Json{{"probs", {0.5, 0.5}}, {"n", 0}}); }), "pmf.n"));
    CHECK(mentions(parse_message([] { pmf_from_json(Json{{"probs", {0.5, 0.5}}, {"extra", 1}}); }), "pmf.extra"));
    CHECK(mentions(parse_message([] { pmf_from_json(Json::array({0.5, 0.6})); }), "pmf"));
}

TEST_CASE("subset measure round trip") {
    const SubsetMeasure m = subset_measure_from_json(Json{{"n", 2}, {"entries", {{0, 0.25}, {3, 0.75}}}});
    CHECK(m[0] == 0.25);
    CHECK(m[3] == 0.75);
    const SubsetMeasure back = subset_measure_from_json(to_json(m));
    CHECK(std::vector<double>(back.coeffs().begin(), back.coeffs().end()) ==
          std::vector<double>(m.coeffs().begin(), m.coeffs().end()));

    const SubsetMeasure poly =
        subset_measure_from_json(Json{{"n", 1}, {"entries", {{0, 2.0}, {1, 1.0}}}, {"mode", "polynomial"}});
    CHECK(subset_measure_from_json(to_json(poly)).mode() == SubsetMeasure::Mode::polynomial);

    CHECK(mentions(parse_message([] { subset_measure_from_json(Json{{"n", 2}, {"entries", {{4, 1.0}}}}); }),
                   "measure.entries[0][0]"));
    CHECK(mentions(parse_message([] { subset_measure_from_json(Json{{"n", 2}, {"entries", {{1, "x"}}}}); }),
                   "measure.entries[0][1]"));
    CHECK(mentions(parse_message([] {
                       subset_measure_from_json(Json{{"n", 1}, {"entries", {{0, 1.0}}}, {"mode", "other"}});
                   }),
                   "measure.mode"));
}

TEST_CASE("joint pmf round trip") {
    const Json j{{"dim", 2}, {"atoms", {{{0, 1}, 0.5}, {{1, 0}, 0.5}}}};
    const JointPmf law = joint_pmf_from_json(j);
    CHECK(law.dim() == 2);
    CHECK(law.mean(0) == doctest::Approx(0.5));
    CHECK(to_json(joint_pmf_from_json(to_json(law))) == to_json(law));
    CHECK(mentions(parse_message([] { joint_pmf_from_json(Json{{"dim", 2}, {"atoms", {{{0}, 1.0}}}}); }), "law"));
    CHECK(mentions(parse_message([] { joint_pmf_from_json(Json{{"dim", 0}, {"atoms", Json::array()}}); }),
                   "law.dim"));
}

TEST_CASE("tau specifications") {
    CHECK(tau_from_json(Json{{"kind", "point"}, {"params", {{"k", 3}}}}).pmf == Pmf::point_mass(3));
    const TruncatedPmf b = tau_from_json(Json{{"kind", "binomial"}, {"params", {{"n", 4}, {"p", 0.5}}}});
    CHECK(b.pmf[2] == doctest::Approx(0.375));
    CHECK(b.truncation_point == 4);
    const TruncatedPmf pb = tau_from_json(Json{{"kind", "poisson_binomial"}, {"params", {{"ps", {0.5, 0.5}}}}});
    CHECK(pb.pmf[1] == doctest::Approx(0.5));
    const TruncatedPmf po =
        tau_from_json(Json{{"kind", "poisson"}, {"params", {{"lambda", 1.0}, {"mass_floor", 1 - 1e-6}}}});
    CHECK(po.retained_mass >= 1 - 1e-6);
    CHECK(po.pmf[0] == doctest::Approx(std::exp(-1.0) / po.retained_mass));
    CHECK(tau_from_json(Json{{"kind", "geometric"}, {"params", {{"p", 0.5}}}}).pmf[0] > 0.5);
    CHECK(tau_from_json(Json{{"kind", "class_q"}, {"params", {{"lambda", 0.5}, {"ps", {0.5}}}}}).pmf.bound() >= 1);
    CHECK(tau_from_json(Json{{"kind", "pmf"}, {"params", {{"probs", {0.5, 0.5}}}}}).pmf.bound() == 1);

    CHECK(mentions(parse_message([] { tau_from_json(Json{{"kind", "zeta"}}); }), "tau.kind"));
    CHECK(mentions(parse_message([] { tau_from_json(Json{{"kind", "point"}, {"params", {{"k", 1}, {"q", 2}}}}); }),
                   "tau.params.q"));
    CHECK(mentions(parse_message([] { tau_from_json(Json{{"kind", "binomial"}, {"params", {{"n", 2}, {"p", 1.5}}}}); }),
                   "tau"));
    CHECK(mentions(parse_message([] { tau_from_json(Json{{"kind", "binomial"}, {"params", {{"n", 2}}}}); }),
                   "tau.params.p"));
}

TEST_CASE("process specifications") {
    const ProcessSpec mixed =
        process_spec_from_json(Json{{"type", "mixed"}, {"tau", {0.0, 1.0}}, {"partition", {0.3, 0.7}}});
    REQUIRE(mixed.mixed);
    CHECK(mixed.mixed->partition.cells() == 2);

    const ProcessSpec dpp = process_spec_from_json(Json{{"type", "dpp"}, {"kernel", {{0.5, 0.0}, {0.0, 0.5}}}});
    REQUIRE(dpp.dpp);
    CHECK(dpp.dpp->cell_of == std::vector<int>{0, 1});

    const ProcessSpec measure =
        process_spec_from_json(Json{{"type", "measure"}, {"n", 1}, {"entries", {{0, 0.5}, {1, 0.5}}}});
    CHECK(measure.measure);
    CHECK_THROWS_AS(measure.model(), Error);

    const ProcessSpec law = process_spec_from_json(Json{{"type", "law"}, {"dim", 1}, {"atoms", {{{0}, 1.0}}}});
    CHECK(law.law);

    CHECK(mentions(parse_message([] { process_spec_from_json(Json{{"type", "cox"}}); }), "process.type"));
    CHECK(mentions(parse_message([] {
                       process_spec_from_json(Json{{"type", "mixed"}, {"tau", {1.0}}, {"partition", {0.7, 0.7}}});
                   }),
                   "process.partition"));
    CHECK(mentions(parse_message([] {
                       process_spec_from_json(Json{{"type", "dpp"}, {"kernel", {{0.5, 0.0}, {0.0}}}});
                   }),
                   "process.kernel[1]"));
    CHECK(mentions(parse_message([] {
                       process_spec_from_json(Json{{"type", "dpp"}, {"kernel", {{0.5}}}, {"cells", {0, 1}}});
                   }),
                   "process.cells"));
    CHECK(mentions(parse_message([] {
                       process_spec_from_json(
                           Json{{"type", "mixed"}, {"tau", {1.0}}, {"partition", {0.5}}, {"extra", true}});
                   }),
                   "process.extra"));
}

TEST_CASE("json syntax errors carry a location") {
    const std::string msg = parse_message([] { parse_json_text("[1, 2,\n 3,, 4]", "input.json"); });
    CHECK(mentions(msg, "input.json"));
    CHECK(mentions(msg, "line 2"));
    CHECK(parse_message([] { read_json_file("/nonexistent/negassoc.json"); }).size() > 0);
}
