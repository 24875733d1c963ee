#include "helson/moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <set>

namespace helson {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// 16-node Gauss-Legendre rule on [-1, 1]; nodes found by Newton iteration on
// the Legendre recurrence, computed once.
struct GaussLegendre16 {
    std::array<double, 16> node{};
    std::array<double, 16> weight{};

    GaussLegendre16() {
        const int n = 16;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            node[i] = x;
            weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

const GaussLegendre16& gl16() {
    static const GaussLegendre16 rule;
    return rule;
}

double integrateOnce(const std::function<double(double)>& f, double a, double b) {
    const auto& rule = gl16();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 16; ++i) sum += rule.weight[i] * f(mid + half * rule.node[i]);
    return sum * half;
}

double evalPoly(const std::vector<double>& coeffs, double s) {
    double v = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) v = v * s + coeffs[k];
    return v;
}

// Exponent of 2 in n when n is a power of two; nullopt otherwise.
std::optional<std::uint32_t> powerOfTwoExponent(std::uint64_t n) {
    if (n == 0 || (n & (n - 1)) != 0) return std::nullopt;
    std::uint32_t k = 0;
    while (n > 1) {
        n >>= 1;
        ++k;
    }
    return k;
}

} // namespace

namespace detail {

double integratePanels(const std::function<double(double)>& f, double a, double b,
                       int panels) {
    if (panels < 1) panels = 1;
    const double w = (b - a) / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) total += integrateOnce(f, a + i * w, a + (i + 1) * w);
    return total;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Point

Point Point::explicitPoint(std::vector<Coordinate> coords) {
    std::erase_if(coords, [](const Coordinate& c) { return c.value == 0.0; });
    std::sort(coords.begin(), coords.end(),
              [](const Coordinate& a, const Coordinate& b) { return a.position < b.position; });
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (coords[i].position == 0) throw DomainError("Point: coordinate positions are 1-based");
        if (!(std::abs(coords[i].value) < 1.0))
            throw DomainError("Point: explicit coordinates must satisfy |value| < 1");
        if (i > 0 && coords[i].position == coords[i - 1].position)
            throw DomainError("Point: duplicate coordinate position");
    }
    Point p;
    p.coords_ = std::move(coords);
    return p;
}

Point Point::bohrPoint(double s) {
    if (!std::isfinite(s)) throw DomainError("Point: Bohr exponent must be finite");
    Point p;
    p.bohr_ = s;
    return p;
}

double Point::bohrExponent() const {
    if (!bohr_) throw ContractError("Point: not a Bohr point");
    return *bohr_;
}

double Point::coordinate(std::uint32_t position) const {
    if (bohr_) return std::pow(static_cast<double>(nthPrime(position)), -*bohr_);
    for (const auto& c : coords_)
        if (c.position == position) return c.value;
    return 0.0;
}

double Point::monomialValue(const MultiIndex& kappa) const {
    if (bohr_) {
        const std::uint64_t n = compose(kappa);
        return std::pow(static_cast<double>(n), -*bohr_);
    }
    double v = 1.0;
    auto coord = coords_.begin();
    for (const auto& e : kappa.entries()) {
        while (coord != coords_.end() && coord->position < e.position) ++coord;
        if (coord == coords_.end() || coord->position != e.position) return 0.0;
        for (std::uint32_t i = 0; i < e.exponent; ++i) v *= coord->value;
    }
    return v;
}

// ---------------------------------------------------------------------------
// DiscreteMeasure

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    std::set<std::uint32_t> support;
    for (const auto& atom : atoms_) {
        if (!(atom.weight > 0.0)) throw DomainError("DiscreteMeasure: weights must be positive");
        if (atom.point.isBohr()) {
            hasBohr_ = true;
        } else {
            for (const auto& c : atom.point.coordinates()) support.insert(c.position);
        }
    }
    support_.assign(support.begin(), support.end());
}

// ---------------------------------------------------------------------------
// HalfLineDensity

HalfLineDensity HalfLineDensity::lebesgue() { return HalfLineDensity(Kind::Lebesgue, 0.5, kInf, {}); }

HalfLineDensity HalfLineDensity::weightedPolynomial(double a, double b, std::vector<double> coeffs) {
    if (!(a >= 0.0) || !(b > a)) throw DomainError("HalfLineDensity: interval must satisfy 0 <= a < b");
    HalfLineDensity d(Kind::WeightedPolynomial, a, b, std::move(coeffs));
    const double probe = std::isfinite(b) ? b : a + 16.0;
    for (int i = 0; i <= 256; ++i) {
        const double s = a + (probe - a) * i / 256.0;
        if (evalPoly(d.coeffs_, s) < 0.0)
            throw DomainError("HalfLineDensity: density is negative on its interval");
    }
    return d;
}

HalfLineDensity HalfLineDensity::appendix() { return HalfLineDensity(Kind::Appendix, 0.0, 1.0, {}); }

HalfLineDensity HalfLineDensity::inverseSquareAboveOne() {
    return HalfLineDensity(Kind::InverseSquareAboveOne, 1.0, kInf, {});
}

double HalfLineDensity::massUpTo(double s) const {
    switch (kind_) {
        case Kind::Lebesgue:
            return s > 0.5 ? s - 0.5 : 0.0;
        case Kind::WeightedPolynomial: {
            const double lo = std::max(a_, 0.5);
            const double hi = std::min(s, b_);
            if (hi <= lo) return 0.0;
            // Exact polynomial antiderivative.
            double total = 0.0;
            for (std::size_t k = 0; k < coeffs_.size(); ++k)
                total += coeffs_[k] / (k + 1.0) * (std::pow(hi, k + 1.0) - std::pow(lo, k + 1.0));
            return total;
        }
        case Kind::Appendix:
            throw UnsupportedInputError("HalfLineDensity: appendix measure lives on (0,1) in t, not s");
        case Kind::InverseSquareAboveOne:
            return s > 1.0 ? 1.0 - 1.0 / s : 0.0;
    }
    return 0.0;
}

double HalfLineDensity::densityAt(double s) const {
    switch (kind_) {
        case Kind::Lebesgue:
            return s > 0.5 ? 1.0 : 0.0;
        case Kind::WeightedPolynomial:
            return (s > a_ && s < b_) ? evalPoly(coeffs_, s) : 0.0;
        case Kind::Appendix:
            return (s > 0.0 && s < 1.0) ? 0.5 * s : 0.0;
        case Kind::InverseSquareAboveOne:
            return s > 1.0 ? 1.0 / (s * s) : 0.0;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// OneVarSequence

double OneVarSequence::operator()(std::uint64_t k) const {
    switch (kind_) {
        case Kind::Delta:
            return k == 0 ? 1.0 : 0.0;
        case Kind::Hilbert:
            return 1.0 / (1.0 + static_cast<double>(k));
        case Kind::Appendix:
            return 1.0 / (2.0 * (static_cast<double>(k) + 2.0));
        case Kind::Coefficients:
            return k < coeffs_.size() ? coeffs_[k] : 0.0;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// MomentSequence

MomentSequence MomentSequence::discrete(DiscreteMeasure mu) {
    MomentSequence s;
    s.kind_ = Kind::Discrete;
    s.discrete_ = std::move(mu);
    return s;
}

MomentSequence MomentSequence::halfLine(HalfLineDensity nu) {
    MomentSequence s;
    s.kind_ = Kind::HalfLine;
    s.halfline_ = std::move(nu);
    return s;
}

MomentSequence MomentSequence::multiplicative(std::map<std::uint32_t, OneVarSequence> factors) {
    for (const auto& [pos, seq] : factors)
        if (pos == 0) throw DomainError("MomentSequence: prime positions are 1-based");
    MomentSequence s;
    s.kind_ = Kind::Multiplicative;
    s.factors_ = std::move(factors);
    return s;
}

MomentSequence MomentSequence::closedForm(ClosedFormName name) {
    MomentSequence s;
    s.kind_ = Kind::ClosedForm;
    s.closed_ = name;
    return s;
}

MomentSequence MomentSequence::custom(std::string label, std::function<double(std::uint64_t)> eval) {
    MomentSequence s;
    s.kind_ = Kind::Custom;
    s.label_ = std::move(label);
    s.eval_ = std::move(eval);
    return s;
}

MomentSequence::ClosedFormName MomentSequence::closedFormName() const {
    if (kind_ != Kind::ClosedForm) throw ContractError("MomentSequence: not a closed form");
    return closed_;
}

const DiscreteMeasure& MomentSequence::discreteMeasure() const {
    if (kind_ != Kind::Discrete) throw ContractError("MomentSequence: not discrete");
    return discrete_;
}

const HalfLineDensity& MomentSequence::halfLineDensity() const {
    if (kind_ != Kind::HalfLine) throw ContractError("MomentSequence: not half-line");
    return *halfline_;
}

const std::map<std::uint32_t, OneVarSequence>& MomentSequence::multiplicativeFactors() const {
    if (kind_ != Kind::Multiplicative) throw ContractError("MomentSequence: not multiplicative");
    return factors_;
}

bool MomentSequence::undefinedAtOne() const {
    if (kind_ == Kind::ClosedForm && closed_ == ClosedFormName::MultiplicativeHilbert) return true;
    if (kind_ == Kind::HalfLine && halfline_->kind() == HalfLineDensity::Kind::Lebesgue) return true;
    return false;
}

// ---------------------------------------------------------------------------
// alpha

namespace {

// Exponents of the given primes in n; remaining cofactor returned through
// `cofactor`.
std::vector<std::uint32_t> extractExponents(std::uint64_t n,
                                            const std::vector<std::uint32_t>& positions,
                                            std::uint64_t& cofactor) {
    std::vector<std::uint32_t> exps(positions.size(), 0);
    for (std::size_t i = 0; i < positions.size(); ++i) {
        const std::uint64_t p = nthPrime(positions[i]);
        while (n % p == 0) {
            n /= p;
            ++exps[i];
        }
    }
    cofactor = n;
    return exps;
}

double alphaDiscrete(const DiscreteMeasure& mu, std::uint64_t n) {
    double total = 0.0;
    std::uint64_t cofactor = n;
    std::vector<std::uint32_t> exps;
    if (!mu.explicitSupport().empty())
        exps = extractExponents(n, mu.explicitSupport(), cofactor);
    const bool offSupport = !mu.explicitSupport().empty() ? cofactor != 1 : n != 1;
    for (const auto& atom : mu.atoms()) {
        if (atom.point.isBohr()) {
            total += atom.weight * std::pow(static_cast<double>(n), -atom.point.bohrExponent());
            continue;
        }
        if (offSupport) continue; // some prime outside every explicit support
        double v = 1.0;
        for (std::size_t i = 0; i < mu.explicitSupport().size() && v != 0.0; ++i) {
            const std::uint32_t e = exps[i];
            if (e == 0) continue;
            const double c = atom.point.coordinate(mu.explicitSupport()[i]);
            if (c == 0.0) {
                v = 0.0;
                break;
            }
            for (std::uint32_t r = 0; r < e; ++r) v *= c;
        }
        total += atom.weight * v;
    }
    return total;
}

// int n^{-s} dnu(s) by composite Gauss-Legendre panels; panel width is a few
// multiples of 1/log(n) so each panel resolves the exponential decay, and
// integration stops once the analytic tail is below 1e-14 of the total.
double alphaHalfLine(const HalfLineDensity& nu, std::uint64_t n) {
    using Kind = HalfLineDensity::Kind;
    if (nu.kind() == Kind::Appendix) {
        // 1-d moment reading: alpha(2^k) = 1/(2(k+2)), other n -> 0.
        std::uint64_t cofactor = n;
        auto exps = extractExponents(n, {1}, cofactor);
        if (cofactor != 1) return 0.0;
        return 1.0 / (2.0 * (static_cast<double>(exps[0]) + 2.0));
    }

    if (n == 1) {
        if (nu.kind() == Kind::Lebesgue)
            throw DivergenceError("alpha: Lebesgue half-line density diverges at n = 1");
        if (nu.kind() == Kind::WeightedPolynomial && !std::isfinite(nu.upper())) {
            // Divergent unless the polynomial vanishes identically.
            for (double c : nu.coefficients())
                if (c != 0.0) throw DivergenceError("alpha: density mass diverges at n = 1");
            return 0.0;
        }
    }

    const double logn = std::log(static_cast<double>(n));
    auto integrand = [&](double s) {
        return std::exp(-s * logn) * nu.densityAt(s);
    };

    const double a = nu.lower();
    if (std::isfinite(nu.upper())) {
        const int panels = std::max(4, static_cast<int>(std::ceil((nu.upper() - a) * logn / 4.0)));
        return detail::integratePanels(integrand, a, nu.upper(), panels);
    }

    // Unbounded support: march fixed-width panels until the running panel
    // contribution is negligible relative to the accumulated total.
    const double width = (logn > 0.0) ? 4.0 / logn : 4.0;
    double total = 0.0;
    double lo = a;
    for (int panel = 0; panel < 4096; ++panel) {
        const double piece = integrateOnce(integrand, lo, lo + width);
        total += piece;
        lo += width;
        if (panel >= 8 && std::abs(piece) <= 1e-15 * std::abs(total)) return total;
    }
    throw DivergenceError("alpha: half-line quadrature did not exhaust the tail");
}

double alphaMultiplicative(const std::map<std::uint32_t, OneVarSequence>& factors,
                           std::uint64_t n) {
    double v = 1.0;
    for (const auto& [pos, seq] : factors) {
        const std::uint64_t p = nthPrime(pos);
        std::uint32_t e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        v *= seq(e);
        if (v == 0.0 && n == 1) return 0.0;
    }
    if (n != 1) return 0.0; // default Kronecker delta on every other prime
    return v;
}

double alphaClosedForm(MomentSequence::ClosedFormName name, std::uint64_t n) {
    switch (name) {
        case MomentSequence::ClosedFormName::MultiplicativeHilbert: {
            if (n < 2) throw DivergenceError("alpha: multiplicative Hilbert sequence starts at n = 2");
            const double x = static_cast<double>(n);
            return 1.0 / (std::sqrt(x) * std::log(x));
        }
        case MomentSequence::ClosedFormName::PowerOfTwoHilbert: {
            auto k = powerOfTwoExponent(n);
            if (!k) return 0.0;
            return 1.0 / (1.0 + static_cast<double>(*k));
        }
    }
    return 0.0;
}

} // namespace

double alpha(const MomentSequence& seq, std::uint64_t n) {
    if (n == 0) throw DomainError("alpha: n must be >= 1");
    switch (seq.kind()) {
        case MomentSequence::Kind::Discrete:
            return alphaDiscrete(seq.discrete_, n);
        case MomentSequence::Kind::HalfLine:
            return alphaHalfLine(*seq.halfline_, n);
        case MomentSequence::Kind::Multiplicative:
            return alphaMultiplicative(seq.factors_, n);
        case MomentSequence::Kind::ClosedForm:
            return alphaClosedForm(seq.closed_, n);
        case MomentSequence::Kind::Custom:
            return seq.eval_(n);
    }
    throw ContractError("alpha: unknown sequence kind");
}

// ---------------------------------------------------------------------------
// zeta

double zeta(double x) {
    if (!(x > 1.0)) throw DomainError("zeta: requires x > 1");
    // Euler-Maclaurin: partial sum to N, then integral, half-term and
    // Bernoulli corrections.
    constexpr int N = 24;
    static constexpr double bernoulli[] = {1.0 / 6.0,        -1.0 / 30.0, 1.0 / 42.0,
                                           -1.0 / 30.0,      5.0 / 66.0,  -691.0 / 2730.0,
                                           7.0 / 6.0};
    double sum = 0.0;
    for (int n = 1; n <= N; ++n) sum += std::pow(static_cast<double>(n), -x);
    const double Nd = static_cast<double>(N);
    double value = sum + std::pow(Nd, 1.0 - x) / (x - 1.0) - 0.5 * std::pow(Nd, -x);
    double power = std::pow(Nd, -x - 1.0); // N^{-x-2k+1} for k = 1
    double rising = x;                     // prod_{j=0}^{2k-2}(x+j)
    double factorial = 2.0;                // (2k)!
    for (int k = 1; k <= 7; ++k) {
        value += bernoulli[k - 1] / factorial * rising * power;
        power /= Nd * Nd;
        rising *= (x + 2.0 * k - 1.0) * (x + 2.0 * k);
        factorial *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    return value;
}

// ---------------------------------------------------------------------------
// kernel

double kernel(const Point& a, const Point& b) {
    if (a.isBohr() && b.isBohr()) {
        const double x = a.bohrExponent() + b.bohrExponent();
        if (!(x > 1.0)) throw DivergenceError("kernel: Bohr pair requires s + t > 1");
        return zeta(x);
    }
    // At least one point is explicit, so only its finite support contributes;
    // every other factor is 1/(1 - 0) = 1.
    const Point& expl = a.isBohr() ? b : a;
    const Point& other = a.isBohr() ? a : b;
    double v = 1.0;
    for (const auto& c : expl.coordinates()) {
        const double prod = c.value * other.coordinate(c.position);
        if (!(std::abs(prod) < 1.0))
            throw DivergenceError("kernel: coordinate product |a_j b_j| >= 1");
        v /= (1.0 - prod);
    }
    return v;
}

} // namespace helson
