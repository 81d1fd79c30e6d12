#include "fegraph/matrix_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include "fegraph/errors.hpp"

namespace fegraph {

namespace {

void put_u32_le(std::ostream& out, std::uint32_t v) {
    const unsigned char bytes[4] = {
        static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t get_u32_le(std::istream& in) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) |
           (static_cast<std::uint32_t>(bytes[3]) << 24);
}

void put_f64_le(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i)
        bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_f64_le(std::istream& in) {
    unsigned char bytes[8];
    in.read(reinterpret_cast<char*>(bytes), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_matrix_binary(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw ValidationError("cannot open '" + path + "' for writing");
    put_u32_le(out, static_cast<std::uint32_t>(m.rows()));
    put_u32_le(out, static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            put_f64_le(out, m(i, j));
    if (!out)
        throw ValidationError("failed writing '" + path + "'");
}

Eigen::MatrixXd read_matrix_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open '" + path + "'");
    const std::uint32_t rows = get_u32_le(in);
    const std::uint32_t cols = get_u32_le(in);
    if (!in)
        throw ParseError("'" + path + "': truncated header");
    Eigen::MatrixXd m(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i)
        for (std::uint32_t j = 0; j < cols; ++j)
            m(i, j) = get_f64_le(in);
    if (!in)
        throw ParseError("'" + path + "': truncated payload");
    return m;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
    std::ofstream out(path);
    if (!out)
        throw ValidationError("cannot open '" + path + "' for writing");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j)
                out << ',';
            out << format_full(m(i, j));
        }
        out << '\n';
    }
    if (!out)
        throw ValidationError("failed writing '" + path + "'");
}

void write_embedding_text(const std::string& path, const Eigen::MatrixXd& u) {
    std::ofstream out(path);
    if (!out)
        throw ValidationError("cannot open '" + path + "' for writing");
    out << u.rows() << ' ' << u.cols() << '\n';
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        for (Eigen::Index j = 0; j < u.cols(); ++j) {
            if (j)
                out << ' ';
            out << format_full(u(i, j));
        }
        out << '\n';
    }
    if (!out)
        throw ValidationError("failed writing '" + path + "'");
}

Eigen::MatrixXd read_embedding_text(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open '" + path + "'");
    Eigen::Index n = 0, d = 0;
    if (!(in >> n >> d) || n < 0 || d <= 0)
        throw ParseError("'" + path + "': bad embedding header");
    Eigen::MatrixXd u(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            if (!(in >> u(i, j)))
                throw ParseError("'" + path + "': truncated embedding at row " +
                                 std::to_string(i));
    return u;
}

} // namespace fegraph
