#pragma once

/**
 * @file moments.hpp
 * @brief Measures and the moment sequences alpha they generate, plus
 *        reproducing-kernel and zeta evaluation.
 *
 * A moment sequence assigns alpha(n) = integral of t^{kappa(n)} against a
 * measure on the infinite polydisc, or equivalently alpha(n) = integral of
 * n^{-s} against a measure on the half line. Five generator classes are
 * supported: discrete measures, half-line densities, multiplicative
 * sequences, named closed forms, and caller-supplied evaluators.
 *
 * Everything here is real valued; complex scalars appear only in the
 * finite-rank form calculus.
 */

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "helson/errors.hpp"
#include "helson/index.hpp"

namespace helson {

/// A location in the infinite polydisc: either finitely many explicit real
/// coordinates (unstored coordinates are 0) or a Bohr point p_j^{-s}.
class Point {
public:
    struct Coordinate {
        std::uint32_t position; // 1-based prime position
        double value;           // in (-1, 1), nonzero

        friend bool operator==(const Coordinate&, const Coordinate&) = default;
    };

    /// Explicit point; validates |value| < 1, drops zeros, sorts by position.
    static Point explicitPoint(std::vector<Coordinate> coords);

    /// Bohr point with coordinates p_j^{-s}. Membership in the polydisc
    /// intersected with l^2 (s > 1/2) is checked by the diagnostics, not here.
    static Point bohrPoint(double s);

    bool isBohr() const { return bohr_.has_value(); }
    double bohrExponent() const;
    const std::vector<Coordinate>& coordinates() const { return coords_; }

    /// j-th coordinate value (0 for unstored explicit coordinates).
    double coordinate(std::uint32_t position) const;

    /// lambda^kappa with the 0^0 = 1 convention. For Bohr points this is
    /// n(kappa)^{-s}; overflow of n(kappa) propagates.
    double monomialValue(const MultiIndex& kappa) const;

    friend bool operator==(const Point&, const Point&) = default;

private:
    Point() = default;
    std::vector<Coordinate> coords_;
    std::optional<double> bohr_;
};

/// Finite non-negative atomic measure sum w_l * delta_{lambda^(l)}.
class DiscreteMeasure {
public:
    struct Atom {
        double weight; // > 0
        Point point;
    };

    DiscreteMeasure() = default;
    explicit DiscreteMeasure(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    bool empty() const { return atoms_.empty(); }

    /// Union of the explicit-coordinate prime positions across atoms.
    const std::vector<std::uint32_t>& explicitSupport() const { return support_; }
    bool hasBohrAtom() const { return hasBohr_; }

private:
    std::vector<Atom> atoms_;
    std::vector<std::uint32_t> support_;
    bool hasBohr_ = false;
};

/// Density on the Dirichlet half line generating alpha(n) = int n^{-s} dnu(s).
class HalfLineDensity {
public:
    enum class Kind {
        Lebesgue,          // dnu = ds on (1/2, inf)
        WeightedPolynomial, // dnu = poly(s) ds on (a, b), b may be +inf
        Appendix,          // dnu(t) = (t/2) dt on (0,1), read as 1-d moments
        InverseSquareAboveOne // dnu = s^{-2} ds on (1, inf)
    };

    static HalfLineDensity lebesgue();
    /// coeffs[k] multiplies s^k; density must be >= 0 on (a, b).
    static HalfLineDensity weightedPolynomial(double a, double b, std::vector<double> coeffs);
    static HalfLineDensity appendix();
    static HalfLineDensity inverseSquareAboveOne();

    Kind kind() const { return kind_; }
    double lower() const { return a_; }
    double upper() const { return b_; } // +inf for unbounded variants
    const std::vector<double>& coefficients() const { return coeffs_; }

    /// nu((1/2, s]) in closed form (used by the window diagnostic).
    double massUpTo(double s) const;

    /// Density value at s (0 outside the support interval).
    double densityAt(double s) const;

private:
    HalfLineDensity(Kind k, double a, double b, std::vector<double> coeffs)
        : kind_(k), a_(a), b_(b), coeffs_(std::move(coeffs)) {}
    Kind kind_;
    double a_, b_;
    std::vector<double> coeffs_;
};

/// One-variable coefficient sequence used by the multiplicative generator.
class OneVarSequence {
public:
    enum class Kind { Delta, Hilbert, Appendix, Coefficients };

    static OneVarSequence delta() { return OneVarSequence(Kind::Delta, {}); }
    /// gamma(j) = 1/(1+j), the Hilbert-matrix sequence.
    static OneVarSequence hilbert() { return OneVarSequence(Kind::Hilbert, {}); }
    /// beta(j) = 1/(2(j+2)), moments of (t/2)dt on (0,1).
    static OneVarSequence appendix() { return OneVarSequence(Kind::Appendix, {}); }
    static OneVarSequence coefficients(std::vector<double> c) {
        return OneVarSequence(Kind::Coefficients, std::move(c));
    }

    double operator()(std::uint64_t k) const;
    Kind kind() const { return kind_; }
    const std::vector<double>& storedCoefficients() const { return coeffs_; }

private:
    OneVarSequence(Kind k, std::vector<double> c) : kind_(k), coeffs_(std::move(c)) {}
    Kind kind_;
    std::vector<double> coeffs_;
};

/// Producer of alpha(n).
class MomentSequence {
public:
    enum class Kind { Discrete, HalfLine, Multiplicative, ClosedForm, Custom };
    enum class ClosedFormName { MultiplicativeHilbert, PowerOfTwoHilbert };

    static MomentSequence discrete(DiscreteMeasure mu);
    static MomentSequence halfLine(HalfLineDensity nu);
    /// Per-prime-position one-variable sequences; unstored positions default
    /// to the Kronecker delta.
    static MomentSequence multiplicative(std::map<std::uint32_t, OneVarSequence> factors);
    static MomentSequence closedForm(ClosedFormName name);
    /// Caller-supplied evaluator (used for form-induced sequences).
    static MomentSequence custom(std::string label, std::function<double(std::uint64_t)> eval);

    Kind kind() const { return kind_; }
    ClosedFormName closedFormName() const;
    const DiscreteMeasure& discreteMeasure() const;
    const HalfLineDensity& halfLineDensity() const;
    const std::map<std::uint32_t, OneVarSequence>& multiplicativeFactors() const;
    const std::string& customLabel() const { return label_; }

    /// True when alpha(1) is undefined (offset-2 truncations required).
    bool undefinedAtOne() const;

private:
    MomentSequence() = default;
    Kind kind_ = Kind::Custom;
    DiscreteMeasure discrete_;
    std::optional<HalfLineDensity> halfline_;
    std::map<std::uint32_t, OneVarSequence> factors_;
    ClosedFormName closed_ = ClosedFormName::MultiplicativeHilbert;
    std::string label_;
    std::function<double(std::uint64_t)> eval_;

    friend double alpha(const MomentSequence&, std::uint64_t);
};

/// alpha(seq, n). Discrete and multiplicative sequences are exact; half-line
/// densities are evaluated by panelled Gauss-Legendre quadrature with an
/// analytic tail bound below 1e-14 of the value.
double alpha(const MomentSequence& seq, std::uint64_t n);

/// Riemann zeta for real x > 1, relative error <= 1e-12 (Euler-Maclaurin).
double zeta(double x);

/// Reproducing kernel K(a, b) = prod_j 1/(1 - a_j b_j) of the Hardy space of
/// the infinite polydisc. Bohr-Bohr pairs evaluate to zeta(s + t); pairs with
/// s + t <= 1 diverge.
double kernel(const Point& a, const Point& b);

namespace detail {
/// int_a^b f(s) ds by composite 16-node Gauss-Legendre panels.
double integratePanels(const std::function<double(double)>& f, double a, double b,
                       int panels);
} // namespace detail

} // namespace helson
