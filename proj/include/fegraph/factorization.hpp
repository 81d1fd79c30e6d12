#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "fegraph/similarity.hpp"

namespace fegraph {

// Row i of U is the embedding of node i. V empty means tied (V = U), in
// which case predictions u_i . u_j are symmetric.
struct EmbeddingMatrix {
    Eigen::MatrixXd U;
    std::optional<Eigen::MatrixXd> V;
    bool tied() const { return !V.has_value(); }
    int dim() const { return static_cast<int>(U.cols()); }
};

struct FitOptions {
    int d = 128;
    bool symmetric = false; // ties V = U and excludes the diagonal
    double learning_rate = 0.1;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon_adam = 1e-8;
    int iterations = 300;
    std::uint64_t seed = 0;
    double init_scale = 0.1;
};

struct FitResult {
    EmbeddingMatrix embedding;
    double final_loss = 0.0;
    std::vector<double> loss_trace; // loss_trace[k] = objective after k steps
};

// psi(U, V) = sum_ij S+_ij log sigma(u_i . v_j) + S-_ij log sigma(-u_i . v_j),
// skipping entries with S+ = S- = 0 and, in symmetric mode, the diagonal.
// Always <= 0.
double gmf_loss(const PosNegWeights& w, const EmbeddingMatrix& e, bool symmetric);

struct GmfGradient {
    Eigen::MatrixXd dU;
    std::optional<Eigen::MatrixXd> dV;
};

// Ascent gradient of psi: with g_ij = S+_ij (1 - sigma(u_i . v_j))
// - S-_ij sigma(u_i . v_j), dU = G V and dV = G^T U; the tied case
// accumulates both roles into dU.
GmfGradient gmf_gradient(const PosNegWeights& w, const EmbeddingMatrix& e, bool symmetric);

// Full-batch Adam ascent from a seeded Gaussian start (std init_scale/sqrt(d)).
// Deterministic for fixed options.
FitResult gmf_fit(const PosNegWeights& w, const FitOptions& opts);

// Best rank-d approximation U V^T of a dense matrix, via orthogonal
// iteration on the Gram matrix of the smaller side with a seeded start.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> truncated_svd(const Eigen::MatrixXd& s, int d,
                                                          std::uint64_t seed = 0);

// U V^T (U U^T when tied): predicted log-odds log(S+/S-) for a converged
// generalized fit, plain low-rank approximation for SVD factors.
Eigen::MatrixXd reconstruct(const EmbeddingMatrix& e);

} // namespace fegraph
