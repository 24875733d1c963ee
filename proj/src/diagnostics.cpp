#include "helson/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace helson {

std::string verdictName(Verdict v) {
    switch (v) {
        case Verdict::Bounded: return "bounded";
        case Verdict::Unbounded: return "unbounded";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::vector<double> SGrid::distances() const {
    if (!(maxDistance > 0.0) || decades < 1 || pointsPerDecade < 1)
        throw DomainError("SGrid: maxDistance > 0, decades >= 1, pointsPerDecade >= 1 required");
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(decades) * pointsPerDecade + 1);
    const int total = decades * pointsPerDecade;
    for (int j = 0; j <= total; ++j)
        d.push_back(maxDistance * std::pow(10.0, -static_cast<double>(j) / pointsPerDecade));
    return d;
}

namespace detail {

Verdict verdictFromLevels(const std::vector<double>& levelSups) {
    const std::size_t L = levelSups.size();
    if (L <= 1) return Verdict::Bounded;

    // Relative growth above this threshold counts as genuine; below it is
    // quadrature / rounding noise.
    constexpr double growthTol = 1e-9;

    std::vector<bool> grew(L, false);
    for (std::size_t k = 1; k < L; ++k)
        grew[k] = levelSups[k] > levelSups[k - 1] * (1.0 + growthTol) ||
                  (levelSups[k - 1] <= 0.0 && levelSups[k] > 0.0);

    // Unbounded: a run of >= 3 consecutive growing levels over which the
    // supremum at least doubles.
    std::size_t runStart = 0;
    for (std::size_t k = 1; k <= L; ++k) {
        if (k < L && grew[k]) continue;
        // run of growth covers levels (runStart, k-1]
        if (k - 1 > runStart) {
            const std::size_t runLen = k - 1 - runStart;
            const double base = levelSups[runStart];
            const double top = levelSups[k - 1];
            if (runLen >= 3 && (base <= 0.0 || top >= 2.0 * base)) return Verdict::Unbounded;
        }
        runStart = k;
    }

    // Bounded: no growth across the trailing three levels.
    const std::size_t tail = std::min<std::size_t>(3, L - 1);
    for (std::size_t k = L - tail; k < L; ++k)
        if (grew[k]) return Verdict::Inconclusive;
    return Verdict::Bounded;
}

} // namespace detail

namespace {

// Accumulates values tagged with a dyadic level; keeps per-level cumulative
// suprema plus the global argmax.
class LevelTracker {
public:
    void feed(std::size_t level, double value, double witness) {
        if (levels_.size() <= level) levels_.resize(level + 1, lastSup_);
        if (value > sup_) {
            sup_ = value;
            witness_ = witness;
        }
        for (std::size_t k = level; k < levels_.size(); ++k)
            levels_[k] = std::max(levels_[k], value);
        lastSup_ = std::max(lastSup_, value);
    }

    double sup() const { return sup_; }
    double witness() const { return witness_; }

    Verdict verdict() const {
        // Make the per-level values cumulative before applying the heuristic.
        std::vector<double> cumulative(levels_);
        for (std::size_t k = 1; k < cumulative.size(); ++k)
            cumulative[k] = std::max(cumulative[k], cumulative[k - 1]);
        return detail::verdictFromLevels(cumulative);
    }

private:
    std::vector<double> levels_;
    double sup_ = -1.0;
    double lastSup_ = -1.0;
    double witness_ = 0.0;
};

std::size_t dyadicLevelOf(std::uint64_t n) {
    std::size_t level = 0;
    while (n > 1) {
        n >>= 1;
        ++level;
    }
    return level;
}

std::string formatIndex(std::uint64_t n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "n=%llu", static_cast<unsigned long long>(n));
    return buf;
}

std::string formatPoint(const std::vector<double>& s) {
    std::string out = "s=(";
    char buf[40];
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g", s[i]);
        out += buf;
        if (i + 1 < s.size()) out += ',';
    }
    out += ')';
    return out;
}

} // namespace

DiagnosticReport coeffDecay1d(const std::function<double(std::uint64_t)>& beta, std::uint64_t N) {
    LevelTracker tracker;
    for (std::uint64_t n = 0; n <= N; ++n) {
        const double value = (1.0 + static_cast<double>(n)) * std::abs(beta(n));
        tracker.feed(dyadicLevelOf(n + 1), value, static_cast<double>(n));
    }
    DiagnosticReport report;
    report.testName = "coeff-decay-1d";
    report.supremumValue = tracker.sup();
    report.witnessPoint = {tracker.witness()};
    report.witness = formatIndex(static_cast<std::uint64_t>(tracker.witness()));
    report.verdict = tracker.verdict();
    return report;
}

DiagnosticReport tensorCoeffDecay(const std::function<double(std::span<const std::uint32_t>)>& beta,
                                  std::uint32_t d, std::uint32_t K) {
    if (d == 0 || K == 0) throw DomainError("tensorCoeffDecay: d and K must be >= 1");
    double cells = 1.0;
    for (std::uint32_t i = 0; i < d; ++i) cells *= K;
    if (cells > 2e6) throw DomainError("tensorCoeffDecay: cube K^d too large");

    LevelTracker tracker;
    std::vector<std::uint32_t> kappa(d, 0);
    std::vector<double> bestKappa(d, 0.0);
    double sup = -1.0;
    while (true) {
        double weight = 1.0;
        std::uint32_t maxExp = 0;
        for (std::uint32_t j = 0; j < d; ++j) {
            weight *= 1.0 + static_cast<double>(kappa[j]);
            maxExp = std::max(maxExp, kappa[j]);
        }
        const double value = std::abs(beta(kappa)) * weight;
        tracker.feed(dyadicLevelOf(maxExp + 1), value, 0.0);
        if (value > sup) {
            sup = value;
            for (std::uint32_t j = 0; j < d; ++j) bestKappa[j] = kappa[j];
        }
        // odometer
        std::uint32_t j = d;
        while (j > 0) {
            --j;
            if (++kappa[j] < K) break;
            kappa[j] = 0;
            if (j == 0) goto done;
        }
    }
done:
    DiagnosticReport report;
    report.testName = "tensor-coeff-decay";
    report.supremumValue = sup;
    report.witnessPoint = bestKappa;
    report.witness = formatPoint(bestKappa);
    report.verdict = tracker.verdict();
    return report;
}

DiagnosticReport windowMulti(const DiscreteMeasure& mu, const SGrid& grid) {
    if (mu.hasBohrAtom())
        throw UnsupportedInputError(
            "windowMulti: Bohr atoms have no finitely checkable window sets; use halflineWindow");

    DiagnosticReport report;
    report.testName = "window-multi";
    report.verdict = Verdict::Bounded; // exact supremum of a finite atomic measure

    const auto& support = mu.explicitSupport();
    if (mu.empty()) {
        report.supremumValue = 0.0;
        report.witness = "empty measure";
        return report;
    }

    // Candidate values per coordinate: 0, the signed atom coordinates (the
    // ratio is piecewise and attains its supremum there), plus grid points on
    // both signs when the total stays enumerable.
    std::vector<std::vector<double>> candidates(support.size());
    for (std::size_t i = 0; i < support.size(); ++i) {
        std::set<double> vals{0.0};
        for (const auto& atom : mu.atoms()) {
            const double t = atom.point.coordinate(support[i]);
            if (t != 0.0) vals.insert(t);
        }
        candidates[i].assign(vals.begin(), vals.end());
    }
    double combos = 1.0;
    for (const auto& c : candidates) combos *= static_cast<double>(c.size());
    if (!support.empty()) {
        double withGrid = 1.0;
        const auto dist = grid.distances();
        for (const auto& c : candidates) withGrid *= static_cast<double>(c.size() + 2 * dist.size());
        if (withGrid <= 2e6) {
            for (std::size_t i = 0; i < support.size(); ++i) {
                std::set<double> vals(candidates[i].begin(), candidates[i].end());
                for (double delta : dist) {
                    const double s = 1.0 - delta;
                    if (s > 0.0 && s < 1.0) {
                        vals.insert(s);
                        vals.insert(-s);
                    }
                }
                candidates[i].assign(vals.begin(), vals.end());
            }
        } else if (combos > 2e6) {
            throw UnsupportedInputError("windowMulti: too many candidate corners");
        }
    }

    double sup = -1.0;
    std::vector<double> bestS(support.size(), 0.0);
    std::vector<std::size_t> pick(support.size(), 0);
    std::vector<double> s(support.size(), 0.0);
    while (true) {
        for (std::size_t i = 0; i < support.size(); ++i) s[i] = candidates[i][pick[i]];
        double mass = 0.0;
        for (const auto& atom : mu.atoms()) {
            bool inside = true;
            for (std::size_t i = 0; i < support.size() && inside; ++i) {
                const double t = atom.point.coordinate(support[i]);
                if (std::abs(t) < std::abs(s[i]) || t * s[i] < 0.0) inside = false;
            }
            if (inside) mass += atom.weight;
        }
        double denom = 1.0;
        for (double sj : s) denom *= 1.0 - sj * sj;
        const double value = mass / denom;
        if (value > sup) {
            sup = value;
            bestS = s;
        }
        std::size_t i = support.size();
        bool advanced = false;
        while (i > 0) {
            --i;
            if (++pick[i] < candidates[i].size()) {
                advanced = true;
                break;
            }
            pick[i] = 0;
        }
        if (!advanced) break;
        if (support.empty()) break;
    }
    if (support.empty()) {
        // Only s = 0 is relevant; every atom sits at the origin.
        double mass = 0.0;
        for (const auto& atom : mu.atoms()) mass += atom.weight;
        sup = mass;
    }

    report.supremumValue = sup;
    report.witnessPoint = bestS;
    report.witness = formatPoint(bestS);
    return report;
}

DiagnosticReport halflineWindow(const HalfLineDensity& nu, const SGrid& grid) {
    if (nu.kind() == HalfLineDensity::Kind::Appendix)
        throw UnsupportedInputError("halflineWindow: appendix measure lives on (0,1) in t");

    LevelTracker tracker;
    const auto dist = grid.distances();
    const double dmax = dist.front();
    for (double delta : dist) {
        const double s = 0.5 + delta;
        const double ratio = nu.massUpTo(s) / (s - 0.5);
        const std::size_t level = static_cast<std::size_t>(std::floor(std::log2(dmax / delta)));
        tracker.feed(level, ratio, s);
    }
    DiagnosticReport report;
    report.testName = "halfline-window";
    report.supremumValue = tracker.sup();
    report.witnessPoint = {tracker.witness()};
    char buf[48];
    std::snprintf(buf, sizeof(buf), "s=%.12g", tracker.witness());
    report.witness = buf;
    report.verdict = tracker.verdict();
    return report;
}

DiagnosticReport helsonDecay(const MomentSequence& seq, std::uint64_t N) {
    LevelTracker tracker;
    for (std::uint64_t n = 2; n <= N; ++n) {
        const double x = static_cast<double>(n);
        const double weight = std::sqrt(x) * std::log(x);
        const double value = alpha(seq, n) * weight;
        tracker.feed(dyadicLevelOf(n), value, static_cast<double>(n));
    }
    DiagnosticReport report;
    report.testName = "helson-decay";
    report.supremumValue = tracker.sup();
    report.witnessPoint = {tracker.witness()};
    report.witness = formatIndex(static_cast<std::uint64_t>(tracker.witness()));
    report.verdict = tracker.verdict();
    return report;
}

GramDualResult gramDual(const DiscreteMeasure& mu) {
    GramDualResult result;
    const std::size_t k = mu.atoms().size();
    result.dimension = k;
    if (k == 0) {
        result.spectrum.dimension = 0;
        return result;
    }
    result.gram.assign(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            const auto& ai = mu.atoms()[i];
            const auto& aj = mu.atoms()[j];
            const double g = std::sqrt(ai.weight * aj.weight) * kernel(ai.point, aj.point);
            result.gram[i * k + j] = g;
            result.gram[j * k + i] = g;
        }
    }
    result.spectrum = eigDense(result.gram, k);
    return result;
}

} // namespace helson
