#include "fegraph/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fegraph/errors.hpp"

namespace fegraph {

LabelSet make_label_set(std::vector<std::vector<int>> labels) {
    LabelSet ls;
    ls.labels = std::move(labels);
    for (auto& per_node : ls.labels) {
        if (per_node.empty())
            throw ValidationError("label set: every node needs at least one label");
        std::sort(per_node.begin(), per_node.end());
        per_node.erase(std::unique(per_node.begin(), per_node.end()), per_node.end());
        for (int l : per_node) {
            if (l < 0)
                throw ValidationError("label set: labels must be nonnegative");
            ls.num_labels = std::max(ls.num_labels, l + 1);
        }
        if (per_node.size() > 1)
            ls.multi_label = true;
    }
    return ls;
}

std::vector<int> single_labels(const LabelSet& ls) {
    if (ls.multi_label)
        throw ValidationError("operation requires single-label data");
    std::vector<int> out;
    out.reserve(ls.labels.size());
    for (const auto& per_node : ls.labels)
        out.push_back(per_node.front());
    return out;
}

namespace {

double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

// Regularized negative log-likelihood and its gradient for one binary
// problem; the bias is the last coordinate and is not penalized.
struct BinaryProblem {
    const Eigen::MatrixXd& x;
    const Eigen::VectorXd& y; // 0/1
    double l2;

    double value(const Eigen::VectorXd& w, double b) const {
        const Eigen::VectorXd z = x * w + Eigen::VectorXd::Constant(x.rows(), b);
        double nll = 0.0;
        for (Eigen::Index i = 0; i < z.size(); ++i)
            nll += softplus(z(i)) - y(i) * z(i);
        return nll + 0.5 * l2 * w.squaredNorm();
    }

    void gradient(const Eigen::VectorXd& w, double b, Eigen::VectorXd& gw,
                  double& gb) const {
        const Eigen::VectorXd z = x * w + Eigen::VectorXd::Constant(x.rows(), b);
        Eigen::VectorXd resid(z.size());
        for (Eigen::Index i = 0; i < z.size(); ++i) {
            const double p = z(i) > 0.0 ? 1.0 / (1.0 + std::exp(-z(i)))
                                        : std::exp(z(i)) / (1.0 + std::exp(z(i)));
            resid(i) = p - y(i);
        }
        gw = x.transpose() * resid + l2 * w;
        gb = resid.sum();
    }
};

void fit_binary(const BinaryProblem& prob, const LogRegOptions& opts, Eigen::VectorXd& w,
                double& b) {
    w.setZero();
    b = 0.0;
    Eigen::VectorXd gw(w.size());
    double gb = 0.0;
    double step = 1.0;
    for (int it = 0; it < opts.max_iters; ++it) {
        prob.gradient(w, b, gw, gb);
        const double gnorm2 = gw.squaredNorm() + gb * gb;
        if (std::sqrt(gnorm2) < opts.tol)
            break;
        const double f = prob.value(w, b);
        // Backtracking with the Armijo condition, warm-starting from twice
        // the last accepted step.
        step = std::min(step * 2.0, 1e10);
        bool accepted = false;
        for (int half = 0; half < 60; ++half) {
            const Eigen::VectorXd wn = w - step * gw;
            const double bn = b - step * gb;
            if (prob.value(wn, bn) <= f - 1e-4 * step * gnorm2) {
                w = wn;
                b = bn;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            break; // step underflowed; gradient is numerically flat
    }
}

} // namespace

Eigen::MatrixXd LogRegModel::scores(const Eigen::MatrixXd& x) const {
    return (x * w.transpose()).rowwise() + b.transpose();
}

std::vector<std::vector<int>> LogRegModel::predict_top_k(const Eigen::MatrixXd& x,
                                                         const std::vector<int>& k) const {
    if (static_cast<Eigen::Index>(k.size()) != x.rows())
        throw ValidationError("predict_top_k: k list must match example count");
    const Eigen::MatrixXd s = scores(x);
    std::vector<std::vector<int>> out(k.size());
    std::vector<int> order(s.cols());
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] < 0 || k[i] > s.cols())
            throw ValidationError("predict_top_k: k out of range");
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int c) {
            return s(static_cast<Eigen::Index>(i), a) > s(static_cast<Eigen::Index>(i), c);
        });
        out[i].assign(order.begin(), order.begin() + k[i]);
        std::sort(out[i].begin(), out[i].end());
    }
    return out;
}

LogRegModel fit_logreg_ovr(const Eigen::MatrixXd& x, const LabelSet& y,
                           const LogRegOptions& opts, std::uint64_t seed) {
    (void)seed; // the solver is deterministic from the zero start
    if (x.rows() != y.size())
        throw ValidationError("fit_logreg_ovr: feature/label size mismatch");
    if (!x.allFinite())
        throw ValidationError("fit_logreg_ovr: features must be finite");
    if (opts.l2 < 0.0)
        throw ValidationError("fit_logreg_ovr: l2 must be nonnegative");

    LogRegModel model;
    model.w = Eigen::MatrixXd::Zero(y.num_labels, x.cols());
    model.b = Eigen::VectorXd::Zero(y.num_labels);
    for (int label = 0; label < y.num_labels; ++label) {
        Eigen::VectorXd target(x.rows());
        double positives = 0.0;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            const auto& per_node = y.labels[static_cast<std::size_t>(i)];
            const bool has = std::find(per_node.begin(), per_node.end(), label) !=
                             per_node.end();
            target(i) = has ? 1.0 : 0.0;
            positives += target(i);
        }
        if (positives == 0.0 || positives == static_cast<double>(x.rows())) {
            // Degenerate label: constant classifier at the smoothed prior.
            const double p = (positives + 1.0) / (static_cast<double>(x.rows()) + 2.0);
            model.b(label) = std::log(p / (1.0 - p));
            continue;
        }
        BinaryProblem prob{x, target, opts.l2};
        Eigen::VectorXd w(x.cols());
        double b = 0.0;
        fit_binary(prob, opts, w, b);
        model.w.row(label) = w.transpose();
        model.b(label) = b;
    }
    return model;
}

} // namespace fegraph
