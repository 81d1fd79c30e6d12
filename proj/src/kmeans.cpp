#include "fegraph/kmeans.hpp"

#include <limits>

#include "fegraph/errors.hpp"
#include "fegraph/rng.hpp"

namespace fegraph {

namespace {

constexpr int kMaxLloydIters = 300;

KMeansResult run_once(const Eigen::MatrixXd& x, int k, Rng& rng) {
    const Eigen::Index n = x.rows();

    // k-means++ seeding: each next center drawn with probability
    // proportional to the squared distance to the nearest chosen one.
    Eigen::MatrixXd centers(k, x.cols());
    centers.row(0) = x.row(static_cast<Eigen::Index>(rng.uniform_int(n)));
    Eigen::VectorXd dist2 = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = dist2.sum();
        Eigen::Index pick;
        if (total > 0.0) {
            double u = rng.uniform() * total;
            pick = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                u -= dist2(i);
                if (u <= 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<Eigen::Index>(rng.uniform_int(n));
        }
        centers.row(c) = x.row(pick);
        dist2 = dist2.cwiseMin((x.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }

    std::vector<int> labels(n, 0);
    Eigen::VectorXd best2(n);
    for (int iter = 0; iter < kMaxLloydIters; ++iter) {
        bool changed = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            int arg = 0;
            double best = (x.row(i) - centers.row(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
                const double d = (x.row(i) - centers.row(c)).squaredNorm();
                if (d < best) {
                    best = d;
                    arg = c;
                }
            }
            best2(i) = best;
            if (labels[i] != arg) {
                labels[i] = arg;
                changed = true;
            }
        }
        std::vector<Eigen::Index> counts(k, 0);
        for (Eigen::Index i = 0; i < n; ++i)
            ++counts[labels[i]];
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0)
                continue;
            // Reseed to the globally farthest point from its center.
            Eigen::Index far = 0;
            for (Eigen::Index i = 1; i < n; ++i)
                if (best2(i) > best2(far))
                    far = i;
            --counts[labels[far]];
            labels[far] = c;
            counts[c] = 1;
            best2(far) = 0.0;
            changed = true;
        }
        centers.setZero();
        for (Eigen::Index i = 0; i < n; ++i)
            centers.row(labels[i]) += x.row(i);
        for (int c = 0; c < k; ++c)
            centers.row(c) /= static_cast<double>(counts[c]);
        if (!changed)
            break;
    }

    KMeansResult res;
    res.labels = std::move(labels);
    res.objective = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        res.objective += (x.row(i) - centers.row(res.labels[i])).squaredNorm();
    return res;
}

} // namespace

KMeansResult kmeans(const Eigen::MatrixXd& x, int k, int runs, std::uint64_t seed) {
    if (k <= 0 || k > x.rows())
        throw ValidationError("kmeans: k must be in [1, n]");
    if (runs <= 0)
        throw ValidationError("kmeans: runs must be positive");
    if (!x.allFinite())
        throw ValidationError("kmeans: points must be finite");
    KMeansResult best;
    best.objective = std::numeric_limits<double>::infinity();
    for (int r = 0; r < runs; ++r) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        KMeansResult cur = run_once(x, k, rng);
        if (cur.objective < best.objective)
            best = std::move(cur);
    }
    return best;
}

} // namespace fegraph
