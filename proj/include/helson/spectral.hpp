#pragma once

/**
 * @file spectral.hpp
 * @brief Symmetric eigensolvers (dense and iterative) and operator-norm
 *        estimation across truncation schedules.
 *
 * The dense path is Householder tridiagonalization followed by implicit-shift
 * QL; the iterative path is Lanczos with full reorthogonalization. Both are
 * deterministic: fixed starting vectors, fixed summation order.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "helson/errors.hpp"
#include "helson/matrix.hpp"

namespace helson {

/// Eigenvalues in ascending order with residual bounds; eigenvectors are
/// column-major when requested and empty otherwise.
struct SpectralResult {
    std::vector<double> eigenvalues;
    std::vector<double> residualBounds;      ///< ||A v - lambda v|| <= bound per pair
    std::vector<bool> numericallyZero;       ///< |lambda| < 1e-12 * max|lambda|
    std::vector<double> eigenvectors;        ///< dimension x eigenvalues.size()
    std::size_t dimension = 0;
    bool converged = true;

    double min() const { return eigenvalues.front(); }
    double max() const { return eigenvalues.back(); }

    /// One "eigenvalue,residual" line per pair, 17 significant digits.
    std::string toCsv() const;
};

/// Full spectrum of a dense symmetric matrix (row-major, dim x dim).
/// Throws ContractError if the input deviates from symmetry by more than
/// 1e-12 relative, NumericalError on QL non-convergence.
SpectralResult eigDense(std::span<const double> matrix, std::size_t dim,
                        bool wantVectors = false);

SpectralResult eigDense(const TruncatedMatrix& m, bool wantVectors = false);
SpectralResult eigDense(const HankelTruncation& m, bool wantVectors = false);

/// Symmetric operator given by its action y = A x.
using MatVec = std::function<void(std::span<const double>, std::span<double>)>;

/// Top-k eigenvalues by Lanczos with full reorthogonalization. Residual
/// bounds are |beta_j s_last| per Ritz pair; convergence target is
/// 1e-8 * (operator norm estimate). Non-convergence is reported through
/// `converged` with the best available residuals.
SpectralResult lanczosExtreme(const MatVec& op, std::size_t dim, std::size_t k,
                              std::size_t maxIter = 400);

struct NormSchedulePoint {
    std::uint64_t size;
    double lambdaMax;
};

struct NormScheduleResult {
    std::vector<NormSchedulePoint> points;
    /// Least-squares fit of lambda(N) = limit - slope / ln^2(N) over the last
    /// three points; absent when fewer than three sizes were given.
    std::optional<double> extrapolated;
};

/// lambda_max of buildHelson(seq, N, offset) for each N in `sizes` (ascending),
/// dense for small dimensions and Lanczos beyond, plus the extrapolated limit.
NormScheduleResult normSchedule(const MomentSequence& seq, std::span<const std::uint64_t> sizes,
                                std::uint64_t offset = 1);

/// Same schedule for a one-variable Hankel sequence beta over sizes N.
NormScheduleResult normScheduleHankel1d(const std::function<double(std::uint64_t)>& beta,
                                        std::span<const std::uint64_t> sizes);

/// Fits lambda(N) = limit - slope / ln^2(N) on the last three points.
std::optional<double> extrapolateLogSquare(std::span<const NormSchedulePoint> points);

} // namespace helson
