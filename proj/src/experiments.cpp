#include "helson/experiments.hpp"

#include <algorithm>
#include <cmath>

namespace helson {

MultHilbertStudy multHilbertStudy(std::span<const std::uint64_t> dimensions) {
    const MomentSequence seq =
        MomentSequence::closedForm(MomentSequence::ClosedFormName::MultiplicativeHilbert);

    MultHilbertStudy study;
    study.allBelowPi = true;
    study.allAboveMinusTol = true;
    study.monotoneMax = true;

    double previousMax = -1.0;
    std::uint64_t previousDim = 0;
    std::vector<NormSchedulePoint> points;
    for (std::uint64_t dim : dimensions) {
        if (dim <= previousDim) throw DomainError("multHilbertStudy: dimensions must ascend");
        previousDim = dim;

        const std::uint64_t N = dim + 1; // indices {2, ..., N}
        const TruncatedMatrix matrix = buildHelson(seq, N, 2);
        MultHilbertSizeReport report;
        report.dimension = dim;
        if (dim <= 1024) {
            const SpectralResult eig = eigDense(matrix);
            report.fullSpectrum = true;
            report.eigenvalues = eig.eigenvalues;
            report.lambdaMin = eig.min();
            report.lambdaMax = eig.max();
            for (double v : eig.eigenvalues) {
                study.allBelowPi = study.allBelowPi && v < M_PI;
                study.allAboveMinusTol = study.allAboveMinusTol && v >= -1e-10;
            }
        } else {
            MatVec apply = [&matrix](std::span<const double> x, std::span<double> y) {
                matrix.apply(x, y);
            };
            MatVec applyNeg = [&matrix](std::span<const double> x, std::span<double> y) {
                matrix.apply(x, y);
                for (double& v : y) v = -v;
            };
            report.fullSpectrum = false;
            report.lambdaMax = lanczosExtreme(apply, matrix.dimension(), 1).max();
            report.lambdaMin = -lanczosExtreme(applyNeg, matrix.dimension(), 1).max();
            study.allBelowPi = study.allBelowPi && report.lambdaMax < M_PI;
            study.allAboveMinusTol = study.allAboveMinusTol && report.lambdaMin >= -1e-10;
        }
        study.monotoneMax = study.monotoneMax && report.lambdaMax >= previousMax;
        previousMax = report.lambdaMax;
        points.push_back({dim, report.lambdaMax});
        study.perSize.push_back(std::move(report));
    }
    study.extrapolated = extrapolateLogSquare(points);
    return study;
}

double xnormFactor(double s) {
    if (!(s >= 0.0) || !(s < 1.0)) throw DomainError("xnormFactor: s must lie in [0, 1)");
    if (s < 0.125) {
        // Series sum_k (k+1)/(2(k+2)) s^k; the closed form cancels badly here.
        double total = 0.0, power = 1.0;
        for (int k = 0; k < 64; ++k) {
            total += (k + 1.0) / (2.0 * (k + 2.0)) * power;
            power *= s;
            if (power < 1e-20) break;
        }
        return (1.0 - s * s) * total;
    }
    const double g = (std::log(1.0 - s) + 1.0 / (1.0 - s) - 1.0) / (2.0 * s * s);
    return (1.0 - s * s) * g;
}

XNormReport counterexampleXnorm(std::uint32_t N, std::span<const double> sGrid) {
    if (N < 1) throw DomainError("counterexampleXnorm: N must be >= 1");
    XNormReport report;
    report.coordinates = N;

    // The integral of |K_d(t, s)|^2 against mu_N factorizes per coordinate,
    // so the supremum over s uses the best per-coordinate factor everywhere.
    double bestFactor = xnormFactor(0.0); // = total nu mass, 1/4
    double bestS = 0.0;
    for (double s : sGrid) {
        const double f = xnormFactor(s);
        if (f > bestFactor) {
            bestFactor = f;
            bestS = s;
        }
    }
    report.bestS = bestS;
    report.factorAtBestS = bestFactor;

    // Depth d <= N: d factors at the best grid value, the remaining N - d
    // nu-coordinates integrate to their total mass 1/4; delta_0 coordinates
    // contribute 1 at s_j = 0.
    double sup = 0.0;
    std::uint32_t bestD = 1;
    const double nuMass = 0.25;
    for (std::uint32_t d = 1; d <= N; ++d) {
        double value = 1.0;
        for (std::uint32_t j = 0; j < d; ++j) value *= bestFactor;
        for (std::uint32_t j = d; j < N; ++j) value *= nuMass;
        if (value > sup) {
            sup = value;
            bestD = d;
        }
    }
    report.supValue = sup;
    report.bestD = bestD;
    return report;
}

RatioReport counterexampleRatio(std::uint32_t N) {
    if (N < 1) throw DomainError("counterexampleRatio: N must be >= 1");
    RatioReport report;
    report.coordinates = N;

    const auto beta = [](std::uint64_t k) { return 1.0 / (2.0 * (static_cast<double>(k) + 2.0)); };
    const std::uint64_t sizes[] = {64, 256, 1024};
    const NormScheduleResult schedule = normScheduleHankel1d(beta, sizes);
    report.schedule = schedule.points;
    report.lambdaHat = schedule.points.back().lambdaMax;

    // Grid accumulating at s = 1 keeps the X-norm close to its value 1.
    std::vector<double> grid;
    for (int j = 0; j <= 240; ++j) grid.push_back(1.0 - std::pow(10.0, -j / 40.0));
    const XNormReport xnorm = counterexampleXnorm(N, grid);
    report.xnorm = xnorm.supValue;

    double lambdaPow = 1.0, target = 1.0;
    for (std::uint32_t j = 0; j < N; ++j) {
        lambdaPow *= report.lambdaHat;
        target *= M_PI / 2.0;
    }
    report.estimate = lambdaPow / report.xnorm;
    report.target = target;
    return report;
}

TensorCheckReport counterexampleTensorCheck(std::uint32_t cap) {
    TensorCheckReport report;
    report.cap = cap;
    const auto beta = [](std::uint64_t k) { return 1.0 / (2.0 * (static_cast<double>(k) + 2.0)); };
    const HankelTruncation one = buildHankel1d(beta, cap);
    const HankelTruncation two = buildHankelMulti(beta, 2, cap);
    report.lambda1d = eigDense(one).max();
    report.lambda2d = eigDense(two).max();
    report.lambda1dSquared = report.lambda1d * report.lambda1d;
    return report;
}

} // namespace helson
