#pragma once

#include <string>

#include <Eigen/Core>

namespace fegraph {

// Binary container: 8-byte header of two little-endian uint32 (rows, cols),
// then row-major little-endian float64 payload.
void write_matrix_binary(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_binary(const std::string& path);

// Comma-separated values with full double round-trip precision, one matrix
// row per line; intended for inspection.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);

// Embedding text format: first line "n d", then one node per line with d
// space-separated coordinates.
void write_embedding_text(const std::string& path, const Eigen::MatrixXd& u);
Eigen::MatrixXd read_embedding_text(const std::string& path);

} // namespace fegraph
