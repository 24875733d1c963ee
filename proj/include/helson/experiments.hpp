#pragma once

/**
 * @file experiments.hpp
 * @brief Scripted reproductions of the named numerical objects: the
 *        multiplicative Hilbert matrix spectrum study and the reproducing-
 *        kernel-testing counterexample.
 *
 * Operator norms with logarithmically slow truncation convergence are never
 * claimed to equal their analytic targets; the reports carry the provable
 * lower bounds (computed truncations) next to the targets.
 */

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "helson/spectral.hpp"

namespace helson {

struct MultHilbertSizeReport {
    std::uint64_t dimension = 0; ///< matrix dimension; indices {2, ..., dimension + 1}
    double lambdaMin = 0.0;
    double lambdaMax = 0.0;
    bool fullSpectrum = false;   ///< dense (all eigenvalues) vs Lanczos extremes
    std::vector<double> eigenvalues; ///< full list on the dense range
};

struct MultHilbertStudy {
    std::vector<MultHilbertSizeReport> perSize;
    bool allBelowPi = false;       ///< every eigenvalue < pi
    bool allAboveMinusTol = false; ///< every eigenvalue >= -1e-10
    bool monotoneMax = false;      ///< lambda_max non-decreasing in the dimension
    std::optional<double> extrapolated;
};

/// Spectra of the multiplicative Hilbert matrix truncations at the given
/// matrix dimensions (ascending).
MultHilbertStudy multHilbertStudy(std::span<const std::uint64_t> dimensions);

struct XNormReport {
    std::uint32_t coordinates = 0;   ///< N, number of nu-coordinates in mu_N
    double supValue = 0.0;           ///< sup over the grid and over d <= N
    double bestS = 0.0;              ///< grid value attaining the per-factor max
    std::uint32_t bestD = 0;         ///< depth attaining the supremum
    double factorAtBestS = 0.0;      ///< (1 - s^2) * int (1 - s t)^{-2} dnu(t)
};

/// Reproducing-kernel testing norm of mu_N = nu^N x delta_0^inf for
/// dnu(t) = (t/2) dt on (0, 1). The per-coordinate factor has the closed form
/// (1 - s^2)/(2 s^2) (log(1-s) + 1/(1-s) - 1), bounded by 1, with the
/// supremum approached as s -> 1.
XNormReport counterexampleXnorm(std::uint32_t N, std::span<const double> sGrid);

/// (1 - s^2) * int_0^1 (1 - s t)^{-2} dnu(t) for s in [0, 1).
double xnormFactor(double s);

struct RatioReport {
    std::uint32_t coordinates = 0;
    double lambdaHat = 0.0;  ///< largest computed truncated norm of H_1(beta)
    double xnorm = 0.0;
    double estimate = 0.0;   ///< lambdaHat^N / xnorm, a provable lower bound
    double target = 0.0;     ///< (pi/2)^N
    std::vector<NormSchedulePoint> schedule;
};

/// ||M(alpha_N)|| / ||mu_N||_X lower-bound estimate against the target
/// (pi/2)^N, using Hankel truncations of beta(kappa) = 1/(2(kappa+2)).
RatioReport counterexampleRatio(std::uint32_t N);

struct TensorCheckReport {
    std::uint32_t cap = 0;
    double lambda1d = 0.0;
    double lambda2d = 0.0;
    double lambda1dSquared = 0.0;
};

/// Exercises the tensor decomposition literally: the 2-d cube truncation of
/// the product sequence has lambda_max equal to the squared 1-d value.
TensorCheckReport counterexampleTensorCheck(std::uint32_t cap);

} // namespace helson
