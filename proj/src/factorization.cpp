#include "fegraph/factorization.hpp"

#include <cmath>
#include <string>

#include "fegraph/errors.hpp"
#include "fegraph/rng.hpp"

namespace fegraph {

namespace {

double log_sigmoid(double z) {
    // log sigma(z) = -softplus(-z), split to avoid exp overflow.
    return z > 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

double sigmoid(double z) {
    return z > 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
}

void check_shapes(const PosNegWeights& w, const EmbeddingMatrix& e, bool symmetric) {
    if (w.s_plus.rows() != w.s_minus.rows() || w.s_plus.cols() != w.s_minus.cols())
        throw ValidationError("gmf: S+ and S- shapes differ");
    if ((w.s_plus.array() < 0.0).any() || (w.s_minus.array() < 0.0).any())
        throw ValidationError("gmf: S+ and S- must be nonnegative");
    if (e.U.rows() != w.s_plus.rows())
        throw ValidationError("gmf: U row count does not match S+");
    if (symmetric) {
        if (w.s_plus.rows() != w.s_plus.cols())
            throw ValidationError("gmf: symmetric mode needs a square matrix");
        if (!e.tied())
            throw ValidationError("gmf: symmetric mode needs tied embeddings");
    }
    const Eigen::MatrixXd& v = e.tied() ? e.U : *e.V;
    if (v.rows() != w.s_plus.cols() || v.cols() != e.U.cols())
        throw ValidationError("gmf: V shape does not match S+ and U");
}

} // namespace

double gmf_loss(const PosNegWeights& w, const EmbeddingMatrix& e, bool symmetric) {
    check_shapes(w, e, symmetric);
    const Eigen::MatrixXd& v = e.tied() ? e.U : *e.V;
    const Eigen::MatrixXd z = e.U * v.transpose();
    double psi = 0.0; // accumulated row-major for a reproducible sum order
    for (Eigen::Index i = 0; i < z.rows(); ++i)
        for (Eigen::Index j = 0; j < z.cols(); ++j) {
            if (symmetric && i == j)
                continue;
            const double sp = w.s_plus(i, j), sm = w.s_minus(i, j);
            if (sp == 0.0 && sm == 0.0)
                continue;
            psi += sp * log_sigmoid(z(i, j)) + sm * log_sigmoid(-z(i, j));
        }
    return psi;
}

GmfGradient gmf_gradient(const PosNegWeights& w, const EmbeddingMatrix& e, bool symmetric) {
    check_shapes(w, e, symmetric);
    const Eigen::MatrixXd& v = e.tied() ? e.U : *e.V;
    Eigen::MatrixXd gate(w.s_plus.rows(), w.s_plus.cols());
    const Eigen::MatrixXd z = e.U * v.transpose();
    for (Eigen::Index i = 0; i < z.rows(); ++i)
        for (Eigen::Index j = 0; j < z.cols(); ++j) {
            const double sp = w.s_plus(i, j), sm = w.s_minus(i, j);
            if ((symmetric && i == j) || (sp == 0.0 && sm == 0.0)) {
                gate(i, j) = 0.0;
                continue;
            }
            const double sig = sigmoid(z(i, j));
            gate(i, j) = sp * (1.0 - sig) - sm * sig;
        }
    GmfGradient grad;
    if (e.tied()) {
        // u_i appears as both row and column factor.
        grad.dU = gate * e.U + gate.transpose() * e.U;
    } else {
        grad.dU = gate * *e.V;
        grad.dV = gate.transpose() * e.U;
    }
    return grad;
}

FitResult gmf_fit(const PosNegWeights& w, const FitOptions& opts) {
    if (opts.d <= 0)
        throw ValidationError("gmf_fit: d must be positive");
    if (opts.iterations <= 0)
        throw ValidationError("gmf_fit: iterations must be positive");
    if (!(opts.learning_rate > 0.0) || !(opts.init_scale > 0.0))
        throw ValidationError("gmf_fit: learning_rate and init_scale must be positive");
    if (!(opts.beta1 > 0.0 && opts.beta1 < 1.0 && opts.beta2 > 0.0 && opts.beta2 < 1.0))
        throw ValidationError("gmf_fit: beta1, beta2 must be in (0, 1)");
    if (!(opts.epsilon_adam > 0.0))
        throw ValidationError("gmf_fit: epsilon_adam must be positive");

    const Eigen::Index n = w.s_plus.rows();
    const Eigen::Index m = w.s_plus.cols();
    const double stddev = opts.init_scale / std::sqrt(static_cast<double>(opts.d));
    Rng rng(opts.seed);
    auto gaussian = [&](Eigen::Index rows) {
        Eigen::MatrixXd x(rows, opts.d);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < opts.d; ++j)
                x(i, j) = stddev * rng.normal();
        return x;
    };

    FitResult res;
    res.embedding.U = gaussian(n);
    if (!opts.symmetric)
        res.embedding.V = gaussian(m);

    struct AdamState {
        Eigen::MatrixXd m1, m2;
        explicit AdamState(const Eigen::MatrixXd& like)
            : m1(Eigen::MatrixXd::Zero(like.rows(), like.cols())),
              m2(Eigen::MatrixXd::Zero(like.rows(), like.cols())) {}
    };
    AdamState su(res.embedding.U);
    std::optional<AdamState> sv;
    if (!opts.symmetric)
        sv.emplace(*res.embedding.V);

    auto step = [&](Eigen::MatrixXd& theta, AdamState& state, const Eigen::MatrixXd& g,
                    int t) {
        state.m1 = opts.beta1 * state.m1 + (1.0 - opts.beta1) * g;
        state.m2.array() = opts.beta2 * state.m2.array() +
                           (1.0 - opts.beta2) * g.array().square();
        const double c1 = 1.0 - std::pow(opts.beta1, t);
        const double c2 = 1.0 - std::pow(opts.beta2, t);
        // Ascent step with bias-corrected moments.
        theta.array() += opts.learning_rate * (state.m1.array() / c1) /
                         ((state.m2.array() / c2).sqrt() + opts.epsilon_adam);
    };

    res.loss_trace.reserve(static_cast<std::size_t>(opts.iterations) + 1);
    res.loss_trace.push_back(gmf_loss(w, res.embedding, opts.symmetric));
    for (int t = 1; t <= opts.iterations; ++t) {
        const GmfGradient g = gmf_gradient(w, res.embedding, opts.symmetric);
        step(res.embedding.U, su, g.dU, t);
        if (!opts.symmetric)
            step(*res.embedding.V, *sv, *g.dV, t);
        const double psi = gmf_loss(w, res.embedding, opts.symmetric);
        if (!std::isfinite(psi))
            throw NumericalError("gmf_fit: non-finite objective at iteration " +
                                 std::to_string(t));
        res.loss_trace.push_back(psi);
    }
    res.final_loss = res.loss_trace.back();
    return res;
}

namespace {

// Modified Gram-Schmidt, run twice for orthogonality at working precision.
// Columns that vanish (rank-deficient input) are replaced by deterministic
// fresh directions and re-orthogonalized.
void orthonormalize(Eigen::MatrixXd& q, Rng& rng) {
    for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < q.cols(); ++j) {
            for (Eigen::Index k = 0; k < j; ++k)
                q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
            double norm = q.col(j).norm();
            while (norm < 1e-12) {
                for (Eigen::Index i = 0; i < q.rows(); ++i)
                    q(i, j) = rng.normal();
                for (Eigen::Index k = 0; k < j; ++k)
                    q.col(j) -= q.col(k).dot(q.col(j)) * q.col(k);
                norm = q.col(j).norm();
            }
            q.col(j) /= norm;
        }
    }
}

} // namespace

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> truncated_svd(const Eigen::MatrixXd& s, int d,
                                                          std::uint64_t seed) {
    if (d <= 0 || d > std::min(s.rows(), s.cols()))
        throw ValidationError("truncated_svd: d must be in [1, min(n, m)]");
    if (!s.allFinite())
        throw ValidationError("truncated_svd: matrix must be finite");
    // Work on the smaller Gram matrix; its top-d eigenvectors span the
    // dominant singular subspace of that side.
    const bool use_cols = s.cols() <= s.rows();
    const Eigen::MatrixXd gram =
        use_cols ? Eigen::MatrixXd(s.transpose() * s) : Eigen::MatrixXd(s * s.transpose());

    Rng rng(seed);
    Eigen::MatrixXd q(gram.rows(), d);
    for (Eigen::Index i = 0; i < q.rows(); ++i)
        for (Eigen::Index j = 0; j < q.cols(); ++j)
            q(i, j) = rng.normal();
    orthonormalize(q, rng);

    for (int sweep = 0; sweep < 1000; ++sweep) {
        Eigen::MatrixXd next = gram * q;
        orthonormalize(next, rng);
        // Distance between subspaces: d - ||Q_old^T Q_new||_F^2 is 0 iff
        // they coincide.
        const double overlap = (q.transpose() * next).squaredNorm();
        q = next;
        if (std::sqrt(std::max(0.0, static_cast<double>(d) - overlap)) < 1e-10)
            break;
    }
    if (use_cols)
        return {s * q, q};       // U V^T = S Q Q^T
    return {q, s.transpose() * q}; // U V^T = Q Q^T S
}

Eigen::MatrixXd reconstruct(const EmbeddingMatrix& e) {
    const Eigen::MatrixXd& v = e.tied() ? e.U : *e.V;
    return e.U * v.transpose();
}

} // namespace fegraph
