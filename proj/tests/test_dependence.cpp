#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "negassoc/dependence.hpp"
#include "negassoc/error.hpp"
#include "negassoc/laws.hpp"
#include "negassoc/pointproc.hpp"
#include "negassoc/upsets.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/util.hpp"

using namespace negassoc;
using testutil::law;

namespace {

JointPmf comonotone() { return law(2, {{{0, 0}, 0.5}, {{1, 1}, 0.5}}); }
JointPmf antitone() { return law(2, {{{0, 1}, 0.5}, {{1, 0}, 0.5}}); }

std::vector<std::vector<double>> member_points(const Poset& p, const UpSet& u) {
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (u.contains(i)) out.push_back(p.point(i));
    std::sort(out.begin(), out.end());
    return out;
}

// Mixed-process count law with a random class-Q tau.
JointPmf random_count_law(Stream& s, std::size_t m) {
    const Pmf tau = poisson_binomial(gen::probabilities(s, 3));
    return exact_count_law(MixedSampledProcess{tau, PartitionModel(gen::partition(s, m))}).law;
}

}  // namespace

TEST_CASE("enumerate_up_sets examples") {
    const Poset bit({{0}, {1}});
    const auto one = enumerate_up_sets(bit);
    REQUIRE(one.size() == 1);
    CHECK(member_points(bit, one[0]) == std::vector<std::vector<double>>{{1}});

    const Poset square({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    const auto sq = enumerate_up_sets(square);
    CHECK(sq.size() == 4);
    std::vector<std::vector<std::vector<double>>> got;
    for (const auto& u : sq) got.push_back(member_points(square, u));
    std::sort(got.begin(), got.end());
    std::vector<std::vector<std::vector<double>>> want{
        {{1, 1}}, {{0, 1}, {1, 1}}, {{1, 0}, {1, 1}}, {{0, 1}, {1, 0}, {1, 1}}};
    std::sort(want.begin(), want.end());
    CHECK(got == want);

    const Poset chain({{0}, {1}, {2}});
    const auto ch = enumerate_up_sets(chain);
    REQUIRE(ch.size() == 2);
}

TEST_CASE("up-set enumeration matches brute force and is closed") {
    Stream s(41, 0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<std::vector<double>> pts;
        const int n = 3 + trial % 8;
        while (static_cast<int>(pts.size()) < n) {
            std::vector<double> p{std::floor(s.uniform(0, 4)), std::floor(s.uniform(0, 4))};
            if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
        }
        const Poset poset(pts);
        const auto ups = enumerate_up_sets(poset);
        CHECK(ups.size() == oracle::up_sets(pts).size());
        for (const auto& u : ups)
            for (std::size_t a = 0; a < pts.size(); ++a)
                if (u.contains(a))
                    for (std::size_t b : poset.strictly_above(a)) CHECK(u.contains(b));
    }
}

TEST_CASE("enumeration caps refuse large antichains") {
    std::vector<std::vector<double>> pts;
    for (int i = 0; i < 30; ++i) pts.push_back({double(i), double(29 - i)});
    const Poset anti(pts);
    try {
        check_enumeration_caps(anti, {});
        FAIL("expected guard");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::guard_exceeded);
    }
    // Chains are cheap even when long.
    std::vector<std::vector<double>> line;
    for (int i = 0; i < 40; ++i) line.push_back({double(i)});
    CHECK_NOTHROW(check_enumeration_caps(Poset(line), {}));
}

TEST_CASE("is_na examples") {
    const JointPmf trial = law(2, {{{1, 0}, 0.3}, {{0, 1}, 0.7}});
    CHECK(is_na(trial).holds());
    const Pmf b({0.4, 0.6});
    const std::vector<Pmf> marg{b, Pmf({0.2, 0.5, 0.3})};
    CHECK(is_na(JointPmf::independent(marg)).holds());

    const DependenceVerdict v = is_na(comonotone());
    REQUIRE_FALSE(v.holds());
    REQUIRE(v.witness);
    CHECK(v.witness->value == doctest::Approx(0.25));
    CHECK(v.witness->up_set_a == std::vector<std::vector<double>>{{1}});
    CHECK(v.witness->up_set_b == std::vector<std::vector<double>>{{1}});
    CHECK(witness_covariance(comonotone(), *v.witness) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("is_sna examples") {
    CHECK(is_sna(law(2, {{{1, 0}, 0.3}, {{0, 1}, 0.7}})).holds());
    CHECK(is_sna(antitone()).holds());
    const DependenceVerdict v = is_sna(comonotone());
    REQUIRE_FALSE(v.holds());
    CHECK(v.witness->value == doctest::Approx(0.25));
    CHECK(v.witness->threshold == 0.0);
}

TEST_CASE("is_nqd examples") {
    const std::vector<Pmf> marg{Pmf({0.4, 0.6}), Pmf({0.5, 0.5})};
    CHECK(is_nqd(JointPmf::independent(marg)).holds);
    CHECK(is_nqd(antitone()).holds);
    CHECK_FALSE(is_nqd(comonotone()).holds);
    CHECK_THROWS_AS(is_nqd(law(3, {{{0, 0, 0}, 1.0}})), Error);
}

TEST_CASE("wcs_dominates examples") {
    const JointPmf a = antitone();
    CHECK(wcs_dominates(a, a).holds());
    CHECK(wcs_dominates(a, a.product_of_marginals()).holds());
    CHECK_FALSE(wcs_dominates(comonotone(), comonotone().product_of_marginals()).holds());
    CHECK_THROWS_AS(wcs_dominates(a, law(3, {{{0, 0, 0}, 1.0}})), Error);
}

TEST_CASE("sm_dominates_bivariate examples") {
    CHECK(sm_dominates_bivariate(antitone(), antitone()).holds());
    CHECK(sm_dominates_bivariate(antitone(), antitone().product_of_marginals()).holds());
    const DependenceVerdict v = sm_dominates_bivariate(comonotone(), comonotone().product_of_marginals());
    REQUIRE_FALSE(v.holds());
    CHECK(v.witness->point == std::vector<double>{0, 0});
    try {
        sm_dominates_bivariate(antitone(), law(2, {{{0, 0}, 1.0}}));
        FAIL("expected marginal mismatch");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::marginal_mismatch);
    }
}

TEST_CASE("closure search agrees with exhaustive search and brute force") {
    Stream s(42, 0);
    DependenceOptions exhaustive;
    exhaustive.search = DependenceOptions::Search::exhaustive;
    for (int trial = 0; trial < 40; ++trial) {
        // Mix NA count laws with arbitrary random laws so both verdicts occur.
        JointPmf j;
        if (trial % 2 == 0) {
            j = random_count_law(s, 2 + trial % 2);
        } else {
            std::map<JointPmf::Point, double> w;
            for (int a = 0; a < 6; ++a) w[{std::floor(s.uniform(0, 3)), std::floor(s.uniform(0, 3))}] += s.uniform();
            j = JointPmf::from_weights(2, w, true);
        }
        const auto fast = is_na(j);
        const auto slow = is_na(j, exhaustive);
        const double brute = oracle::na_max_covariance(testutil::atoms(j), j.dim());
        CHECK(fast.holds() == slow.holds());
        CHECK(fast.holds() == (brute <= 1e-10));
        if (fast.holds()) {
            CHECK(fast.max_value == doctest::Approx(slow.max_value).epsilon(1e-12));
        } else {
            CHECK(witness_covariance(j, *fast.witness) == doctest::Approx(fast.witness->value).epsilon(1e-12));
            CHECK(witness_covariance(j, *slow.witness) == doctest::Approx(slow.witness->value).epsilon(1e-12));
        }
    }
}

TEST_CASE("property: NA survives marginalization") {
    Stream s(43, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const JointPmf j = random_count_law(s, 3);
        REQUIRE(is_na(j).holds());
        for (const std::vector<std::size_t>& keep : {std::vector<std::size_t>{0, 1}, {0, 2}, {1, 2}, {2, 0}})
            CHECK(is_na(j.marginal(keep)).holds());
    }
}

TEST_CASE("property: independent concatenation of NA laws is NA") {
    Stream s(44, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const JointPmf a = random_count_law(s, 2);
        const JointPmf b = random_count_law(s, 2);
        CHECK(is_na(independent_concat(a, b)).holds());
    }
}

TEST_CASE("property: monotone maps of disjoint blocks keep NA") {
    Stream s(45, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const JointPmf j = random_count_law(s, 4);
        REQUIRE(is_na(j).holds());
        std::map<JointPmf::Point, double> sums, maxes;
        for (std::size_t a = 0; a < j.size(); ++a) {
            const auto x = j.point(a);
            sums[{x[0] + x[1], x[2] + x[3]}] += j.prob(a);
            maxes[{std::max(x[0], x[2]), x[1] + 2 * x[3]}] += j.prob(a);
        }
        CHECK(is_na(JointPmf::from_weights(2, sums)).holds());
        CHECK(is_na(JointPmf::from_weights(2, maxes)).holds());
    }
}

TEST_CASE("property: NA implies sNA and NQD; wcs against the product matches sNA") {
    Stream s(46, 0);
    for (int trial = 0; trial < 30; ++trial) {
        JointPmf j;
        if (trial % 3 == 0) {
            j = random_count_law(s, 2);
        } else {
            std::map<JointPmf::Point, double> w;
            for (int a = 0; a < 5; ++a) w[{std::floor(s.uniform(0, 3)), std::floor(s.uniform(0, 2))}] += s.uniform();
            j = JointPmf::from_weights(2, w, true);
        }
        const bool na = is_na(j).holds();
        const bool sna = is_sna(j).holds();
        if (na) {
            CHECK(sna);
            CHECK(is_nqd(j).holds);
        }
        CHECK(wcs_dominates(j, j.product_of_marginals()).holds() == sna);
    }
}

TEST_CASE("property: wcs implies sm for bivariate equal-marginal pairs") {
    Stream s(47, 0);
    int wcs_pairs = 0;
    for (int trial = 0; trial < 40; ++trial) {
        std::map<JointPmf::Point, double> w;
        for (int a = 0; a < 5; ++a) w[{std::floor(s.uniform(0, 3)), std::floor(s.uniform(0, 3))}] += s.uniform();
        const JointPmf x = JointPmf::from_weights(2, w, true);
        const JointPmf y = x.product_of_marginals();
        if (wcs_dominates(x, y).holds()) {
            ++wcs_pairs;
            CHECK(sm_dominates_bivariate(x, y).holds());
        }
    }
    CHECK(wcs_pairs > 0);
}
