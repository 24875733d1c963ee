#pragma once

/**
 * @file diagnostics.hpp
 * @brief Executable forms of the boundedness equivalences: coefficient decay
 *        (one and several variables), Carleson window conditions on the
 *        polydisc and the half line, and the Gram-dual spectrum.
 *
 * A finite computation can never certify unboundedness, so verdicts follow a
 * documented heuristic: "unbounded" requires sustained doubling growth across
 * at least three consecutive dyadic levels; "bounded" requires the supremum
 * to have stopped improving over the trailing levels; anything else is
 * "inconclusive". Suprema over grids are lower bounds of the true suprema.
 */

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "helson/moments.hpp"
#include "helson/spectral.hpp"

namespace helson {

enum class Verdict { Bounded, Unbounded, Inconclusive };

std::string verdictName(Verdict v);

struct DiagnosticReport {
    std::string testName;
    double supremumValue = 0.0;
    std::string witness;               ///< formatted argmax (index or grid point)
    std::vector<double> witnessPoint;  ///< numeric argmax when applicable
    Verdict verdict = Verdict::Inconclusive;
};

/// Dyadic evaluation grid accumulating at a singular endpoint: distances
/// maxDistance * 10^{-j/pointsPerDecade}, j = 0, ..., decades*pointsPerDecade.
struct SGrid {
    double maxDistance = 1.0;
    int decades = 6;
    int pointsPerDecade = 40;

    /// Distances in descending order.
    std::vector<double> distances() const;
};

/// sup_{n <= N} (1+n)|beta(n)| with its argmax; Widom's d=1 decay condition.
DiagnosticReport coeffDecay1d(const std::function<double(std::uint64_t)>& beta, std::uint64_t N);

/// sup over the cube {kappa_j < K} of |beta(kappa)| * prod(1 + kappa_j).
DiagnosticReport tensorCoeffDecay(const std::function<double(std::span<const std::uint32_t>)>& beta,
                                  std::uint32_t d, std::uint32_t K);

/// Carleson window ratio mu(I_s) / prod(1 - s_j^2) for a discrete measure
/// with explicit atoms. Candidate s values combine the grid with the atom
/// coordinates themselves, which makes the reported supremum exact for
/// finite atomic measures. Bohr atoms are rejected.
DiagnosticReport windowMulti(const DiscreteMeasure& mu, const SGrid& grid);

/// Half-line window ratio nu((1/2, s]) / (s - 1/2) over a grid accumulating
/// at 1/2 from above.
DiagnosticReport halflineWindow(const HalfLineDensity& nu, const SGrid& grid);

/// sup_{2 <= n <= N} alpha(n) sqrt(n) log(n) with dyadic divergence tracking.
DiagnosticReport helsonDecay(const MomentSequence& seq, std::uint64_t N);

/// Gram matrix G[i][j] = sqrt(w_i w_j) K(lambda_i, lambda_j) of a k-atom
/// measure together with its spectrum. The nonzero spectrum of the full
/// Helson matrix equals the spectrum of G, so truncation eigenvalues converge
/// upward to these values.
struct GramDualResult {
    std::vector<double> gram; ///< row-major k x k
    std::size_t dimension = 0;
    SpectralResult spectrum;  ///< empty eigenvalue list for the empty measure
};

GramDualResult gramDual(const DiscreteMeasure& mu);

namespace detail {
/// Shared verdict heuristic over cumulative suprema per dyadic level.
Verdict verdictFromLevels(const std::vector<double>& levelSups);
} // namespace detail

} // namespace helson
