#include "negassoc/pointproc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

#include "negassoc/error.hpp"
#include "negassoc/numeric.hpp"

namespace negassoc {

namespace {

constexpr double kPartitionSlack = 1e-12;
constexpr double kKernelTolerance = 1e-10;
constexpr double kClipLimit = 1e-12;
constexpr std::size_t kMarkedSumGuard = 200'000;
constexpr double kMarkGrid = 1e-9;

std::size_t draw_index(const std::vector<double>& cdf, double u) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

std::vector<double> cumulative(std::span<const double> probs) {
    std::vector<double> cdf;
    cdf.reserve(probs.size());
    CompensatedSum<double> acc;
    for (double p : probs) {
        acc.add(p);
        cdf.push_back(acc.value());
    }
    return cdf;
}

void require_valid_kernel(const DppModel& d) {
    const DppDiagnostics diag = dpp_validate(d);
    if (!diag.pass()) fail(ErrorKind::precondition, "invalid determinantal kernel: " + diag.failures.front());
}

}  // namespace

PartitionModel::PartitionModel(std::vector<double> q) : q_(std::move(q)) {
    if (q_.empty()) fail(ErrorKind::dimension_mismatch, "PartitionModel: no tracked cells");
    CompensatedSum<double> total;
    for (double v : q_) {
        if (!(v >= 0.0) || !std::isfinite(v))
            fail(ErrorKind::domain, "PartitionModel: cell probabilities must be non-negative");
        total.add(v);
    }
    if (total.value() > 1.0 + kPartitionSlack)
        fail(ErrorKind::domain, "PartitionModel: cell probabilities sum above 1");
    remainder_ = std::max(0.0, 1.0 - total.value());
}

std::size_t DppModel::cells() const {
    int top = -1;
    for (int c : cell_of) top = std::max(top, c);
    return static_cast<std::size_t>(top + 1);
}

CountVectorLaw exact_count_law(const MixedSampledProcess& p) {
    const std::size_t m = p.partition.cells();
    const int bound = p.tau.bound();
    if (m > kMaxCells) fail(ErrorKind::guard_exceeded, "exact_count_law: more than 6 cells");
    if (bound > kMaxTauBound) fail(ErrorKind::guard_exceeded, "exact_count_law: tau bound above 30");

    const auto& q = p.partition.q();
    double tracked = 0.0;
    for (double v : q) tracked += v;
    tracked = std::min(tracked, 1.0);

    // Total tracked count S is a binomial thinning of tau; given S = s the
    // cell counts are multinomial(s; q / sum q).
    std::vector<double> total_law(static_cast<std::size_t>(bound) + 1, 0.0);
    for (int s = 0; s <= bound; ++s) {
        CompensatedSum<double> acc;
        for (int n = s; n <= bound; ++n)
            acc.add(p.tau[n] * binomial_coefficient(n, s) * std::pow(tracked, s) *
                    std::pow(1.0 - tracked, n - s));
        total_law[static_cast<std::size_t>(s)] = acc.value();
    }

    std::vector<double> share(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) share[i] = tracked > 0.0 ? q[i] / tracked : 0.0;

    std::vector<JointPmf::Point> support;
    std::vector<double> probs;
    std::vector<double> counts(m, 0.0);
    auto rec = [&](auto&& self, std::size_t cell, int left, int s, double w) -> void {
        if (cell + 1 == m) {
            counts[cell] = left;
            const double prob = w * std::pow(share[cell], left) * total_law[static_cast<std::size_t>(s)];
            if (prob > 0.0) {
                support.push_back(counts);
                probs.push_back(prob);
            }
            return;
        }
        for (int k = 0; k <= left; ++k) {
            counts[cell] = k;
            self(self, cell + 1, left - k, s,
                 w * binomial_coefficient(left, k) * std::pow(share[cell], k));
        }
    };
    for (int s = 0; s <= bound; ++s)
        if (total_law[static_cast<std::size_t>(s)] > 0.0) rec(rec, 0, s, s, 1.0);

    CompensatedSum<double> total;
    for (double w : probs) total.add(w);
    for (double& w : probs) w /= total.value();
    return {JointPmf(m, std::move(support), std::move(probs)), p.tau_retained_mass};
}

MixedSampler::MixedSampler(const MixedSampledProcess& p)
    : tau_cdf_(cumulative(p.tau.probs())), cells_(p.partition.cells()) {
    std::vector<double> cell_probs = p.partition.q();
    cell_probs.push_back(p.partition.remainder());
    cell_cdf_ = cumulative(cell_probs);
}

std::vector<int> MixedSampler::operator()(Stream& stream) const {
    std::vector<int> counts(cells_, 0);
    // Scale by the final cdf value so rounding never leaves mass unreachable.
    const std::size_t n = draw_index(tau_cdf_, stream.uniform() * tau_cdf_.back());
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t c = draw_index(cell_cdf_, stream.uniform() * cell_cdf_.back());
        if (c < cells_) ++counts[c];
    }
    return counts;
}

std::vector<int> sample_mixed(const MixedSampledProcess& p, Stream& stream) {
    return MixedSampler(p)(stream);
}

JointPmf marked_sum_law(const Pmf& tau, const JointPmf& mark_law) {
    const std::size_t m = mark_law.dim();
    for (std::size_t a = 0; a < mark_law.size(); ++a) {
        const auto x = mark_law.point(a);
        const auto positive = std::count_if(x.begin(), x.end(), [](double v) { return v > 0.0; });
        if (positive > 1)
            fail(ErrorKind::precondition,
                 "marked_sum_law: a mark has more than one strictly positive coordinate");
    }

    using Key = std::vector<long long>;
    auto key_of = [](const JointPmf::Point& x) {
        Key k;
        k.reserve(x.size());
        for (double v : x) k.push_back(std::llround(v / kMarkGrid));
        return k;
    };
    using Atoms = std::map<Key, std::pair<JointPmf::Point, double>>;

    Atoms current;
    current[Key(m, 0)] = {JointPmf::Point(m, 0.0), 1.0};
    std::map<Key, std::pair<JointPmf::Point, double>> result;
    auto accumulate_into_result = [&](double weight) {
        if (weight == 0.0) return;
        for (const auto& [k, atom] : current) {
            auto [it, inserted] = result.try_emplace(k, atom.first, 0.0);
            it->second.second += weight * atom.second;
        }
    };
    accumulate_into_result(tau[0]);
    for (int n = 1; n <= tau.bound(); ++n) {
        Atoms next;
        for (const auto& [k, atom] : current) {
            for (std::size_t a = 0; a < mark_law.size(); ++a) {
                JointPmf::Point sum = atom.first;
                const auto mark = mark_law.point(a);
                for (std::size_t c = 0; c < m; ++c) sum[c] += mark[c];
                const Key key = key_of(sum);
                auto [it, inserted] = next.try_emplace(key, sum, 0.0);
                it->second.second += atom.second * mark_law.prob(a);
            }
        }
        current = std::move(next);
        if (current.size() > kMarkedSumGuard)
            fail(ErrorKind::guard_exceeded, "marked_sum_law: support exceeds 200000 atoms");
        accumulate_into_result(tau[n]);
    }

    std::map<JointPmf::Point, double> weights;
    for (const auto& [k, atom] : result) weights[atom.first] += atom.second;
    return JointPmf::from_weights(m, weights, true);
}

DppDiagnostics dpp_validate(const DppModel& d) {
    DppDiagnostics out;
    const auto& k = d.kernel;
    if (k.rows() != k.cols()) {
        out.failures.push_back("kernel is not square");
        return out;
    }
    if (d.cell_of.size() != static_cast<std::size_t>(k.rows()))
        out.failures.push_back("cell labels do not cover the ground set");
    for (int c : d.cell_of)
        if (c < -1) {
            out.failures.push_back("cell label below -1");
            break;
        }
    if (k.rows() == 0) return out;

    out.symmetry_defect = (k - k.transpose()).cwiseAbs().maxCoeff();
    if (out.symmetry_defect > kKernelTolerance)
        out.failures.push_back("kernel is not symmetric (defect " + std::to_string(out.symmetry_defect) + ")");

    const Eigen::MatrixXd sym = 0.5 * (k + k.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = solver.eigenvalues();
    out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    out.min_eigenvalue = ev.minCoeff();
    out.max_eigenvalue = ev.maxCoeff();
    if (out.min_eigenvalue < -kKernelTolerance)
        out.failures.push_back("eigenvalue " + std::to_string(out.min_eigenvalue) + " < 0");
    if (out.max_eigenvalue > 1.0 + kKernelTolerance)
        out.failures.push_back("eigenvalue " + std::to_string(out.max_eigenvalue) + " > 1");
    return out;
}

DppSubsetLaw dpp_exact_law(const DppModel& d) {
    const std::size_t n = d.ground_size();
    if (n > kMaxDppExactGround)
        fail(ErrorKind::guard_exceeded, "dpp_exact_law: ground set above 12 points");
    require_valid_kernel(d);

    std::vector<double> probs(std::size_t{1} << n);
    double clip = 0.0;
    for (SubsetMeasure::Mask s = 0; s < probs.size(); ++s) {
        Eigen::MatrixXd m = d.kernel;
        for (std::size_t i = 0; i < n; ++i)
            if (!(s >> i & 1U)) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) -= 1.0;
        double det = n == 0 ? 1.0 : m.fullPivLu().determinant();
        const int complement = static_cast<int>(n) - std::popcount(s);
        if (complement % 2 == 1) det = -det;
        if (det < 0.0) {
            clip = std::max(clip, -det);
            det = 0.0;
        }
        probs[s] = det;
    }
    if (clip > kClipLimit)
        fail(ErrorKind::precondition,
             "dpp_exact_law: negative subset probability " + std::to_string(-clip));
    CompensatedSum<double> total;
    for (double p : probs) total.add(p);
    for (double& p : probs) p /= total.value();
    return {SubsetMeasure(static_cast<int>(n), std::move(probs)), clip};
}

CountVectorLaw dpp_count_law(const DppModel& d) {
    const DppSubsetLaw exact = dpp_exact_law(d);
    const std::size_t m = d.cells();
    if (m == 0) fail(ErrorKind::dimension_mismatch, "dpp_count_law: no tracked cells");
    std::map<JointPmf::Point, double> weights;
    for (SubsetMeasure::Mask s = 0; s < exact.law.size(); ++s) {
        if (exact.law[s] == 0.0) continue;
        JointPmf::Point counts(m, 0.0);
        for (std::size_t i = 0; i < d.ground_size(); ++i)
            if ((s >> i & 1U) && d.cell_of[i] >= 0) counts[static_cast<std::size_t>(d.cell_of[i])] += 1.0;
        weights[counts] += exact.law[s];
    }
    return {JointPmf::from_weights(m, weights, true), 1.0};
}

JointPmf subset_indicator_law(const SubsetMeasure& m) {
    const std::size_t n = static_cast<std::size_t>(m.n());
    std::vector<JointPmf::Point> support;
    std::vector<double> probs;
    for (SubsetMeasure::Mask s = 0; s < m.size(); ++s) {
        if (m[s] == 0.0) continue;
        JointPmf::Point x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = (s >> i & 1U) ? 1.0 : 0.0;
        support.push_back(std::move(x));
        probs.push_back(m[s]);
    }
    return JointPmf(n, std::move(support), std::move(probs));
}

DppSampler::DppSampler(const DppModel& d) : cell_of_(d.cell_of), cells_(d.cells()) {
    require_valid_kernel(d);
    const Eigen::MatrixXd sym = 0.5 * (d.kernel + d.kernel.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    eigenvectors_ = solver.eigenvectors();
    eigenvalues_ = solver.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);
}

std::vector<int> DppSampler::operator()(Stream& stream) const {
    const Eigen::Index n = eigenvectors_.rows();
    std::vector<Eigen::Index> kept;
    for (Eigen::Index j = 0; j < n; ++j)
        if (stream.uniform() < eigenvalues_(j)) kept.push_back(j);

    Eigen::MatrixXd v(n, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t c = 0; c < kept.size(); ++c) v.col(static_cast<Eigen::Index>(c)) = eigenvectors_.col(kept[c]);

    std::vector<int> subset;
    while (v.cols() > 0) {
        const Eigen::VectorXd weight = v.rowwise().squaredNorm();
        std::vector<double> w(weight.data(), weight.data() + weight.size());
        const std::vector<double> cdf = cumulative(w);
        const auto item = static_cast<Eigen::Index>(draw_index(cdf, stream.uniform() * cdf.back()));
        subset.push_back(static_cast<int>(item));

        // Remove the direction of e_item from the span: eliminate with the
        // column of largest |v(item, .)|, then re-orthonormalize.
        Eigen::Index pivot = 0;
        v.row(item).cwiseAbs().maxCoeff(&pivot);
        const Eigen::VectorXd pivot_col = v.col(pivot);
        Eigen::MatrixXd next(n, v.cols() - 1);
        for (Eigen::Index c = 0, out = 0; c < v.cols(); ++c) {
            if (c == pivot) continue;
            next.col(out++) = v.col(c) - pivot_col * (v(item, c) / pivot_col(item));
        }
        for (Eigen::Index c = 0; c < next.cols(); ++c) {
            for (Eigen::Index prev = 0; prev < c; ++prev)
                next.col(c) -= next.col(prev).dot(next.col(c)) * next.col(prev);
            const double norm = next.col(c).norm();
            if (norm > 0.0) next.col(c) /= norm;
        }
        v = std::move(next);
    }
    std::sort(subset.begin(), subset.end());
    return subset;
}

std::vector<int> DppSampler::counts(const std::vector<int>& subset) const {
    std::vector<int> out(cells_, 0);
    for (int i : subset) {
        const int c = cell_of_[static_cast<std::size_t>(i)];
        if (c >= 0) ++out[static_cast<std::size_t>(c)];
    }
    return out;
}

std::vector<int> dpp_sample(const DppModel& d, Stream& stream) { return DppSampler(d)(stream); }

std::vector<double> intensity(const CountVectorLaw& law) {
    std::vector<double> out;
    for (std::size_t c = 0; c < law.law.dim(); ++c) out.push_back(law.law.mean(c));
    return out;
}

}  // namespace negassoc
