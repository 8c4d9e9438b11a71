#pragma once

#include <utility>
#include <vector>

#include "negassoc/joint_pmf.hpp"
#include "support/oracles.hpp"

namespace testutil {

inline std::vector<oracle::Atom> atoms(const negassoc::JointPmf& law) {
    std::vector<oracle::Atom> out;
    for (std::size_t a = 0; a < law.size(); ++a) {
        const auto x = law.point(a);
        out.push_back({oracle::Point(x.begin(), x.end()), law.prob(a)});
    }
    return out;
}

inline negassoc::JointPmf law(std::size_t dim, std::vector<std::pair<std::vector<double>, double>> atoms) {
    std::vector<negassoc::JointPmf::Point> pts;
    std::vector<double> probs;
    for (auto& [x, p] : atoms) {
        pts.push_back(std::move(x));
        probs.push_back(p);
    }
    return negassoc::JointPmf(dim, std::move(pts), std::move(probs));
}

/// P(point) under a law, 0 when absent.
inline double prob_of(const negassoc::JointPmf& law, const std::vector<double>& x) {
    for (std::size_t a = 0; a < law.size(); ++a) {
        const auto p = law.point(a);
        if (std::equal(p.begin(), p.end(), x.begin(), x.end())) return law.prob(a);
    }
    return 0.0;
}

inline std::vector<double> probs_of(const negassoc::Pmf& p) { return {p.probs().begin(), p.probs().end()}; }

}  // namespace testutil
