#pragma once

/**
 * @file matrix.hpp
 * @brief Truncated Helson and Hankel matrix construction and matrix-vector
 *        products.
 *
 * Helson truncations are dense symmetric matrices A[n][m] = alpha(n*m) over
 * n, m in {offset, ..., N}; Hankel truncations live on the per-coordinate
 * cube {kappa : kappa_j < K} so that tensor identities hold exactly.
 */

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "helson/errors.hpp"
#include "helson/moments.hpp"

namespace helson {

/// Dense symmetric truncation of a Helson matrix. Row/column i corresponds to
/// the integer index offset + i.
class TruncatedMatrix {
public:
    TruncatedMatrix(std::uint64_t size, std::uint64_t offset, std::vector<double> data);

    std::uint64_t size() const { return size_; }     // largest integer index N
    std::uint64_t offset() const { return offset_; } // 1 or 2
    std::size_t dimension() const { return dim_; }   // N - offset + 1

    double at(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
    const std::vector<double>& data() const { return data_; }

    /// y = A x, summing each row left to right.
    void apply(std::span<const double> x, std::span<double> y) const;

    /// Frobenius norm.
    double frobeniusNorm() const;

private:
    std::uint64_t size_;
    std::uint64_t offset_;
    std::size_t dim_;
    std::vector<double> data_;
};

/// Builds the truncation A[n][m] = alpha(seq, n*m), offset <= n, m <= N.
/// alpha is evaluated exactly once per distinct product value.
TruncatedMatrix buildHelson(const MomentSequence& seq, std::uint64_t N, std::uint64_t offset = 1);

/// Hankel truncation on d variables over the cube {kappa : kappa_j < K},
/// entries beta(kappa + kappa'). Rows are enumerated in odometer order with
/// the last coordinate fastest.
class HankelTruncation {
public:
    using MultiSequence = std::function<double(std::span<const std::uint32_t>)>;

    HankelTruncation(std::uint32_t d, std::uint32_t K, const MultiSequence& beta);

    std::uint32_t variableCount() const { return d_; }
    std::uint32_t cap() const { return K_; }
    std::size_t dimension() const { return dim_; }
    double at(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }
    const std::vector<double>& data() const { return data_; }

    /// The multi-index of row i (odometer decode).
    std::vector<std::uint32_t> rowIndex(std::size_t i) const;

private:
    std::uint32_t d_, K_;
    std::size_t dim_;
    std::vector<double> data_;
};

/// One-variable Hankel truncation: entry (j, k) = beta(j + k), 0 <= j, k < N.
HankelTruncation buildHankel1d(const std::function<double(std::uint64_t)>& beta, std::uint32_t N);

/// d-variable product-sequence Hankel truncation with a common cap.
HankelTruncation buildHankelMulti(const std::function<double(std::uint64_t)>& beta1d,
                                  std::uint32_t d, std::uint32_t K);

/// Streaming y_n = sum_m alpha(n m) x_m over offset <= n, m <= N, in the same
/// summation order as TruncatedMatrix::apply.
std::vector<double> matvec(const MomentSequence& seq, std::span<const double> x,
                           std::uint64_t N, std::uint64_t offset = 1);

/// ||A (x) B|| = ||A|| ||B|| applied iteratively: the product of the inputs.
double tensorNorm(std::span<const double> norms);

/// Row-major CSV, scientific notation with 17 significant digits.
std::string matrixToCsv(std::span<const double> data, std::size_t rows, std::size_t cols);

} // namespace helson
