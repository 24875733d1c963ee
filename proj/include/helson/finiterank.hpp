#pragma once

/**
 * @file finiterank.hpp
 * @brief Finite-rank Helson form calculus: sparse polynomials in countably
 *        many variables, factorizable differential operators attached to
 *        points, exact rank, graded boundedness, analytic symbols, and
 *        symmetric-tensor canonicalization.
 *
 * A Helson form [f, g] = sum_l D(c^(l))(f g)(lambda^(l)) is represented by a
 * list of (operator, point) terms. Derivatives are exact formal operations on
 * sparse polynomials, so every finite computation here is exact up to
 * floating-point rounding.
 */

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "helson/errors.hpp"
#include "helson/index.hpp"
#include "helson/moments.hpp"

namespace helson {

using Complex = std::complex<double>;

/// Polynomial in countably many variables with finitely many terms; zero
/// coefficients are never stored.
class SparsePolynomial {
public:
    SparsePolynomial() = default;

    static SparsePolynomial constant(Complex c);
    static SparsePolynomial monomial(MultiIndex kappa, Complex c = Complex(1.0, 0.0));

    const std::map<MultiIndex, Complex>& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }
    std::uint64_t degree() const; // max |kappa|, 0 for the zero polynomial

    /// Adds c * z^kappa, erasing the term if the coefficient cancels to 0.
    void add(const MultiIndex& kappa, Complex c);

    SparsePolynomial operator+(const SparsePolynomial& other) const;
    SparsePolynomial operator-(const SparsePolynomial& other) const;
    SparsePolynomial scaled(Complex c) const;

    friend bool operator==(const SparsePolynomial&, const SparsePolynomial&) = default;

private:
    std::map<MultiIndex, Complex> terms_;
};

SparsePolynomial polyMul(const SparsePolynomial& f, const SparsePolynomial& g);

/// A first-order differential operator: either a directional derivative
/// D(c) = sum_j c(j) d/dz_j with finite support, or the log-weighted
/// tangential operator -sum_j log(p_j) z_j d/dz_j (the derivative of the
/// associated Dirichlet series in the half-plane variable). The tangential
/// operator is diagonal on monomials: z^kappa -> -log(n(kappa)) z^kappa.
class Direction {
public:
    struct Component {
        std::uint32_t position;
        Complex value;

        friend bool operator==(const Component&, const Component&) = default;
    };

    static Direction finite(std::vector<Component> components);
    static Direction coordinate(std::uint32_t position, Complex value = Complex(1.0, 0.0));
    static Direction tangentLog();

    bool isTangentLog() const { return tangentLog_; }
    const std::vector<Component>& components() const { return components_; }
    Complex componentAt(std::uint32_t position) const;

    /// Pointwise sum of two finite directions (may cancel to zero, which is
    /// reported through components().empty()).
    static Direction sum(const Direction& a, const Direction& b, Complex scaleB);

    friend bool operator==(const Direction&, const Direction&) = default;

private:
    Direction() = default;
    bool tangentLog_ = false;
    std::vector<Component> components_;
};

/// Exact formal derivative sum_j c(j) df/dz_j (or the tangential action).
SparsePolynomial dirDerivative(const SparsePolynomial& f, const Direction& c);

/// Exact evaluation sum_kappa f_kappa lambda^kappa. Bohr points evaluate
/// monomials through n(kappa)^{-s}; overflow of n(kappa) propagates.
Complex polyEval(const SparsePolynomial& f, const Point& lambda);

/// scalar * D(c_1) ... D(c_M); the empty direction list is multiplication by
/// the scalar (order 0).
struct FactorizableOp {
    Complex scalar = Complex(1.0, 0.0);
    std::vector<Direction> directions;

    std::size_t order() const { return directions.size(); }
    SparsePolynomial apply(const SparsePolynomial& f) const;
};

/// Finite sum of factorizable differential operators attached to points.
class HelsonFormSpec {
public:
    struct Term {
        FactorizableOp op;
        Point point;
    };

    HelsonFormSpec() = default;
    explicit HelsonFormSpec(std::vector<Term> terms) : terms_(std::move(terms)) {}

    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t maxOrder() const;

    /// True when every point is explicit (graded sums are then finite/exact).
    bool allPointsExplicit() const;
    bool hasTangentLog() const;

    /// Prime positions spanned by explicit points and finite directions. For
    /// specs containing a Bohr point the active set is all of N; the bool
    /// reports whether the returned set is exhaustive.
    std::pair<std::vector<std::uint32_t>, bool> activeVariables() const;

private:
    std::vector<Term> terms_;
};

/// [f, g] = sum_l D(c^(l))(f g)(lambda^(l)).
Complex formEval(const HelsonFormSpec& spec, const SparsePolynomial& f,
                 const SparsePolynomial& g);

/// alpha(n) = [z^{kappa(n)}, 1].
Complex formAlpha(const HelsonFormSpec& spec, std::uint64_t n);
Complex formAlphaKappa(const HelsonFormSpec& spec, const MultiIndex& kappa);

/// Real-valued moment sequence backed by formAlpha; throws DomainError on
/// evaluation if a value has a non-negligible imaginary part.
MomentSequence momentSequenceFromForm(HelsonFormSpec spec);

struct RankResult {
    std::uint32_t rank = 0;
    bool stabilized = false;        ///< rank equal across two successive cap doublings
    std::uint64_t finalCap = 0;     ///< largest monomial bound used
    std::vector<std::uint32_t> ranksPerCap;
};

/// Numerical rank (singular values > 1e-9 * sigma_max) of the form matrix
/// [z^kappa, z^kappa'] over monomials with n(kappa) <= cap on the variables
/// appearing in the spec, re-checked at cap doublings degreeCap, 2x, 4x.
RankResult formRank(const HelsonFormSpec& spec, std::uint64_t degreeCap);

struct GradedNormResult {
    double value = 0.0;             ///< exact sum or partial sum
    bool exact = false;             ///< finite active set, no cutoff involved
    bool divergent = false;         ///< partial sums show no decay
    double tailEstimate = 0.0;      ///< geometric tail fitted from dyadic blocks
    std::vector<double> dyadicPartials;
};

/// sum over |kappa| = m of |Lambda(z^kappa)|^2 where Lambda(f) = [f, 1];
/// finite and exact for explicit points, partial sums over n(kappa) <= cutoff
/// for Bohr points with a divergence flag.
GradedNormResult gradedNorm(const HelsonFormSpec& spec, std::uint32_t m,
                            std::uint64_t cutoff = (1ULL << 20));

/// sum over all kappa of |Lambda(z^kappa)|^2 (all grades together), same
/// conventions as gradedNorm. For a bounded evaluation functional at a Bohr
/// point this converges to zeta(2s).
GradedNormResult totalGradedMass(const HelsonFormSpec& spec,
                                 std::uint64_t cutoff = (1ULL << 20));

struct BoundednessReport {
    bool bounded = false;
    std::vector<bool> termOk; ///< per-term point criterion
    std::string reason;
};

/// Bounded iff every point is explicit (automatically in the polydisc and
/// l^2) or Bohr with s > 1/2; finite directions are always l^2.
BoundednessReport boundednessCheck(const HelsonFormSpec& spec);

/// Analytic symbol B(w) = sum_l conj-differentiated reproducing kernel at the
/// spec's points, evaluated at w. Requires a bounded spec; tangential
/// directions are not supported by the closed-form differentiation.
Complex symbolEval(const HelsonFormSpec& spec, const Point& w);

/// kappa-th Taylor coefficient of the analytic symbol, computed from the
/// closed-form expansion of the differentiated kernel product (independent of
/// the formAlpha path; the two agree by construction of the symbol).
Complex symbolTaylor(const HelsonFormSpec& spec, const MultiIndex& kappa);

/// Order-m symmetric tensor as a finite sum scalar * c_1 (x) ... (x) c_m of
/// elementary tensors with finite-support factors.
class SymmetricTensorRep {
public:
    struct Term {
        Complex scalar;
        std::vector<Direction> factors; ///< exactly order() finite directions
    };

    SymmetricTensorRep(std::uint32_t order, std::vector<Term> terms);

    std::uint32_t order() const { return order_; }
    const std::vector<Term>& terms() const { return terms_; }

    /// Entry value at a tuple of coordinate positions (j_1, ..., j_m).
    Complex evaluate(std::span<const std::uint32_t> tuple) const;

    /// Union of the factor supports.
    std::vector<std::uint32_t> support() const;

private:
    std::uint32_t order_;
    std::vector<Term> terms_;
};

/// (1/m!) average over factor permutations, expanded back to elementary terms
/// with identical factor sequences merged. Idempotent on tensor values.
SymmetricTensorRep sym(const SymmetricTensorRep& rep);

/// Eliminates linear dependence among the length-(m-1) partial products by
/// solving for replacement last factors, iterating until the retained partial
/// products are linearly independent. Tensor values are unchanged and the
/// term count never increases.
SymmetricTensorRep canonicalize(const SymmetricTensorRep& rep);

} // namespace helson
