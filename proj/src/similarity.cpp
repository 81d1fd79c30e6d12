#include "fegraph/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "fegraph/errors.hpp"

namespace fegraph {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SimilarityMatrix to_similarity(const DissimilarityMatrix& delta, double percentile,
                               double max_target) {
    if (!(percentile > 0.0) || percentile > 100.0)
        throw ValidationError("to_similarity: percentile must be in (0, 100]");
    if (!(max_target > 0.0))
        throw ValidationError("to_similarity: max_target must be positive");
    const Eigen::MatrixXd& d = delta.values;
    if (static_cast<Eigen::Index>(delta.targets.size()) != d.cols())
        throw ValidationError("to_similarity: target list does not match matrix");

    std::vector<double> offdiag;
    offdiag.reserve(static_cast<std::size_t>(d.size()));
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
        const Eigen::Index tj = delta.targets[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < d.rows(); ++i) {
            if (i == tj)
                continue;
            if (!std::isfinite(d(i, j)))
                throw ValidationError("to_similarity: infinite distance entry; increase the "
                                      "horizon or iterate to convergence");
            offdiag.push_back(d(i, j));
        }
    }
    if (offdiag.empty())
        throw ValidationError("to_similarity: no off-diagonal entries");

    // Nearest-rank percentile: k-th smallest, k = ceil(p/100 * m).
    const std::size_t m = offdiag.size();
    std::size_t k = static_cast<std::size_t>(std::ceil(percentile / 100.0 * m));
    k = std::min(std::max<std::size_t>(k, 1), m);
    std::nth_element(offdiag.begin(), offdiag.begin() + (k - 1), offdiag.end());
    const double b = offdiag[k - 1];

    const double low = *std::min_element(offdiag.begin(), offdiag.begin() + k);
    const double peak = b - low; // max over off-diagonal of (-Delta + b)
    if (!(peak > 0.0))
        throw ValidationError("to_similarity: all off-diagonal distances equal; "
                              "scale is undefined");
    const double gamma = max_target / peak;

    SimilarityMatrix s;
    s.values = gamma * ((-d).array() + b).matrix();
    s.source = SimilaritySource::FE;
    s.shift = b;
    s.scale = gamma;
    s.eta = delta.params.eta;
    return s;
}

SimilarityMatrix deepwalk_similarity(const Graph& g, int window, int negatives,
                                     int dense_cap) {
    if (window <= 0)
        throw ValidationError("deepwalk_similarity: window must be positive");
    if (negatives <= 0)
        throw ValidationError("deepwalk_similarity: negatives must be positive");
    if (g.n > dense_cap)
        throw ValidationError("deepwalk_similarity: graph exceeds dense cap of " +
                              std::to_string(dense_cap) + " nodes");
    const Eigen::MatrixXd p = g.transition();
    Eigen::VectorXd inv_deg(g.n);
    for (int i = 0; i < g.n; ++i)
        inv_deg(i) = 1.0 / g.degree[i];

    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(g.n, g.n);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(g.n, g.n);
    for (int t = 1; t <= window; ++t) {
        power = (power * p).eval();
        acc += power * inv_deg.asDiagonal();
    }
    const double factor = g.total_volume() / (static_cast<double>(negatives) * window);

    SimilarityMatrix s;
    s.values.resize(g.n, g.n);
    for (Eigen::Index j = 0; j < acc.cols(); ++j)
        for (Eigen::Index i = 0; i < acc.rows(); ++i) {
            const double inner = factor * acc(i, j);
            s.values(i, j) = inner > 0.0 ? std::log(inner) : -kInf;
        }
    s.source = SimilaritySource::DeepWalk;
    s.window = window;
    s.negatives = negatives;
    return s;
}

PosNegWeights pos_neg_from_similarity(const SimilarityMatrix& s, double exp_cap) {
    PosNegWeights w;
    w.s_plus.resize(s.values.rows(), s.values.cols());
    w.s_minus = Eigen::MatrixXd::Ones(s.values.rows(), s.values.cols());
    for (Eigen::Index j = 0; j < s.values.cols(); ++j)
        for (Eigen::Index i = 0; i < s.values.rows(); ++i) {
            const double v = s.values(i, j);
            if (v > exp_cap)
                throw ValidationError("pos_neg_from_similarity: similarity entry " +
                                      std::to_string(v) + " exceeds the exp cap; rescale "
                                      "with a smaller max_target (gamma)");
            w.s_plus(i, j) = v == -kInf ? 0.0 : std::exp(v);
        }
    return w;
}

} // namespace fegraph
