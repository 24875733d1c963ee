#include "helson/finiterank.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "helson/spectral.hpp"

namespace helson {

namespace {

constexpr double kZeroTol = 0.0; // coefficients are pruned only on exact cancellation

double powInt(double base, std::uint64_t e) {
    double v = 1.0;
    while (e > 0) {
        if (e & 1) v *= base;
        base *= base;
        e >>= 1;
    }
    return v;
}

double binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double v = 1.0;
    for (std::uint64_t i = 1; i <= k; ++i) v = v * static_cast<double>(n - k + i) / static_cast<double>(i);
    return v;
}

double factorialD(std::uint64_t n) {
    double v = 1.0;
    for (std::uint64_t i = 2; i <= n; ++i) v *= static_cast<double>(i);
    return v;
}

} // namespace

// ---------------------------------------------------------------------------
// SparsePolynomial

SparsePolynomial SparsePolynomial::constant(Complex c) {
    SparsePolynomial p;
    p.add(MultiIndex(), c);
    return p;
}

SparsePolynomial SparsePolynomial::monomial(MultiIndex kappa, Complex c) {
    SparsePolynomial p;
    p.add(kappa, c);
    return p;
}

std::uint64_t SparsePolynomial::degree() const {
    std::uint64_t d = 0;
    for (const auto& [kappa, c] : terms_) d = std::max(d, kappa.degree());
    return d;
}

void SparsePolynomial::add(const MultiIndex& kappa, Complex c) {
    if (c == Complex(0.0, 0.0)) return;
    auto [it, inserted] = terms_.emplace(kappa, c);
    if (!inserted) {
        it->second += c;
        if (std::abs(it->second.real()) <= kZeroTol && std::abs(it->second.imag()) <= kZeroTol)
            terms_.erase(it);
    }
}

SparsePolynomial SparsePolynomial::operator+(const SparsePolynomial& other) const {
    SparsePolynomial out = *this;
    for (const auto& [kappa, c] : other.terms_) out.add(kappa, c);
    return out;
}

SparsePolynomial SparsePolynomial::operator-(const SparsePolynomial& other) const {
    SparsePolynomial out = *this;
    for (const auto& [kappa, c] : other.terms_) out.add(kappa, -c);
    return out;
}

SparsePolynomial SparsePolynomial::scaled(Complex c) const {
    SparsePolynomial out;
    if (c == Complex(0.0, 0.0)) return out;
    for (const auto& [kappa, v] : terms_) out.add(kappa, v * c);
    return out;
}

SparsePolynomial polyMul(const SparsePolynomial& f, const SparsePolynomial& g) {
    SparsePolynomial out;
    for (const auto& [ka, ca] : f.terms())
        for (const auto& [kb, cb] : g.terms()) out.add(multiindexAdd(ka, kb), ca * cb);
    return out;
}

// ---------------------------------------------------------------------------
// Direction

Direction Direction::finite(std::vector<Component> components) {
    std::erase_if(components, [](const Component& c) { return c.value == Complex(0.0, 0.0); });
    std::sort(components.begin(), components.end(),
              [](const Component& a, const Component& b) { return a.position < b.position; });
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (components[i].position == 0) throw DomainError("Direction: positions are 1-based");
        if (i > 0 && components[i].position == components[i - 1].position)
            throw DomainError("Direction: duplicate position");
    }
    Direction d;
    d.components_ = std::move(components);
    return d;
}

Direction Direction::coordinate(std::uint32_t position, Complex value) {
    return finite({Component{position, value}});
}

Direction Direction::tangentLog() {
    Direction d;
    d.tangentLog_ = true;
    return d;
}

Complex Direction::componentAt(std::uint32_t position) const {
    if (tangentLog_) throw ContractError("Direction: tangential operator has no component list");
    for (const auto& c : components_)
        if (c.position == position) return c.value;
    return Complex(0.0, 0.0);
}

Direction Direction::sum(const Direction& a, const Direction& b, Complex scaleB) {
    if (a.isTangentLog() || b.isTangentLog())
        throw ContractError("Direction::sum: only finite directions can be combined");
    std::map<std::uint32_t, Complex> merged;
    for (const auto& c : a.components_) merged[c.position] += c.value;
    for (const auto& c : b.components_) merged[c.position] += c.value * scaleB;
    std::vector<Component> out;
    for (const auto& [pos, v] : merged)
        if (v != Complex(0.0, 0.0)) out.push_back({pos, v});
    return finite(std::move(out));
}

SparsePolynomial dirDerivative(const SparsePolynomial& f, const Direction& c) {
    SparsePolynomial out;
    if (c.isTangentLog()) {
        // Diagonal on monomials: z^kappa -> -log(n(kappa)) z^kappa.
        for (const auto& [kappa, coef] : f.terms()) {
            const double w = -logCompose(kappa);
            if (w != 0.0) out.add(kappa, coef * w);
        }
        return out;
    }
    for (const auto& [kappa, coef] : f.terms()) {
        for (const auto& comp : c.components()) {
            const std::uint32_t e = kappa.exponentAt(comp.position);
            if (e == 0) continue;
            std::vector<MultiIndex::Entry> entries;
            for (const auto& entry : kappa.entries()) {
                if (entry.position == comp.position) {
                    if (entry.exponent > 1) entries.push_back({entry.position, entry.exponent - 1});
                } else {
                    entries.push_back(entry);
                }
            }
            out.add(MultiIndex::fromEntries(std::move(entries)),
                    coef * comp.value * static_cast<double>(e));
        }
    }
    return out;
}

Complex polyEval(const SparsePolynomial& f, const Point& lambda) {
    Complex total(0.0, 0.0);
    for (const auto& [kappa, coef] : f.terms()) total += coef * lambda.monomialValue(kappa);
    return total;
}

// ---------------------------------------------------------------------------
// FactorizableOp / HelsonFormSpec

SparsePolynomial FactorizableOp::apply(const SparsePolynomial& f) const {
    SparsePolynomial h = f;
    for (const Direction& d : directions) h = dirDerivative(h, d);
    return h.scaled(scalar);
}

std::size_t HelsonFormSpec::maxOrder() const {
    std::size_t m = 0;
    for (const auto& t : terms_) m = std::max(m, t.op.order());
    return m;
}

bool HelsonFormSpec::allPointsExplicit() const {
    for (const auto& t : terms_)
        if (t.point.isBohr()) return false;
    return true;
}

bool HelsonFormSpec::hasTangentLog() const {
    for (const auto& t : terms_)
        for (const auto& d : t.op.directions)
            if (d.isTangentLog()) return true;
    return false;
}

std::pair<std::vector<std::uint32_t>, bool> HelsonFormSpec::activeVariables() const {
    std::set<std::uint32_t> vars;
    bool exhaustive = true;
    for (const auto& t : terms_) {
        if (t.point.isBohr()) exhaustive = false;
        for (const auto& c : t.point.coordinates()) vars.insert(c.position);
        for (const auto& d : t.op.directions) {
            if (d.isTangentLog()) continue; // diagonal; adds no new variables
            for (const auto& comp : d.components()) vars.insert(comp.position);
        }
    }
    return {std::vector<std::uint32_t>(vars.begin(), vars.end()), exhaustive};
}

// ---------------------------------------------------------------------------
// Form evaluation

Complex formEval(const HelsonFormSpec& spec, const SparsePolynomial& f,
                 const SparsePolynomial& g) {
    const SparsePolynomial h = polyMul(f, g);
    Complex total(0.0, 0.0);
    for (const auto& term : spec.terms()) total += polyEval(term.op.apply(h), term.point);
    return total;
}

Complex formAlphaKappa(const HelsonFormSpec& spec, const MultiIndex& kappa) {
    const SparsePolynomial z = SparsePolynomial::monomial(kappa);
    Complex total(0.0, 0.0);
    for (const auto& term : spec.terms()) total += polyEval(term.op.apply(z), term.point);
    return total;
}

Complex formAlpha(const HelsonFormSpec& spec, std::uint64_t n) {
    return formAlphaKappa(spec, factorize(n));
}

MomentSequence momentSequenceFromForm(HelsonFormSpec spec) {
    auto eval = [spec = std::move(spec)](std::uint64_t n) {
        const Complex v = formAlpha(spec, n);
        if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real())))
            throw DomainError("form-induced moment sequence: value has an imaginary part");
        return v.real();
    };
    return MomentSequence::custom("form-induced", std::move(eval));
}

// ---------------------------------------------------------------------------
// Rank

namespace {

std::vector<std::uint64_t> rankMonomials(const HelsonFormSpec& spec, std::uint64_t cap) {
    auto [vars, exhaustive] = spec.activeVariables();
    std::vector<std::uint64_t> mono;
    if (!exhaustive) {
        mono.resize(static_cast<std::size_t>(cap));
        std::iota(mono.begin(), mono.end(), 1);
        return mono;
    }
    // Products of the active primes up to the cap.
    mono.push_back(1);
    for (std::uint32_t pos : vars) {
        const std::uint64_t p = nthPrime(pos);
        const std::size_t count = mono.size();
        for (std::size_t i = 0; i < count; ++i) {
            std::uint64_t v = mono[i];
            while (v <= cap / p) {
                v *= p;
                mono.push_back(v);
            }
        }
    }
    std::sort(mono.begin(), mono.end());
    return mono;
}

std::uint32_t numericalRank(const std::vector<Complex>& matrix, std::size_t L) {
    if (L == 0) return 0;
    // Singular values through the augmented Hermitian [[0, F], [F^H, 0]],
    // whose spectrum is {+/- sigma_i}; avoids the precision loss of forming
    // F^H F. The complex Hermitian matrix is embedded as a real symmetric one
    // of twice the size, doubling every eigenvalue.
    const std::size_t n2 = 2 * L; // complex augmented dimension
    const std::size_t n = 2 * n2; // real embedded dimension
    std::vector<double> embed(n * n, 0.0);
    auto put = [&](std::size_t i, std::size_t j, Complex v) {
        embed[i * n + j] = v.real();
        embed[i * n + (n2 + j)] = -v.imag();
        embed[(n2 + i) * n + j] = v.imag();
        embed[(n2 + i) * n + (n2 + j)] = v.real();
    };
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = 0; j < L; ++j) {
            put(i, L + j, matrix[i * L + j]);
            put(L + i, j, std::conj(matrix[j * L + i]));
        }
    const SpectralResult eig = eigDense(embed, n);
    const std::vector<double>& lambda = eig.eigenvalues; // ascending
    const double sigmaMax = std::max(std::abs(lambda.front()), std::abs(lambda.back()));
    if (sigmaMax == 0.0) return 0;
    const double threshold = 1e-9 * sigmaMax;
    std::size_t above = 0;
    for (double v : lambda)
        if (v > threshold) ++above;
    return static_cast<std::uint32_t>(above / 2); // each +sigma appears twice
}

std::uint32_t rankAtCap(const HelsonFormSpec& spec, std::uint64_t cap,
                        std::map<std::uint64_t, Complex>& memo) {
    const auto mono = rankMonomials(spec, cap);
    const std::size_t L = mono.size();
    if (L > 400) throw DomainError("formRank: cap yields too many monomials for dense SVD");
    std::vector<Complex> matrix(L * L);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = i; j < L; ++j) {
            const std::uint64_t product = mono[i] * mono[j];
            auto it = memo.find(product);
            if (it == memo.end()) it = memo.emplace(product, formAlpha(spec, product)).first;
            matrix[i * L + j] = it->second;
            matrix[j * L + i] = it->second;
        }
    return numericalRank(matrix, L);
}

} // namespace

RankResult formRank(const HelsonFormSpec& spec, std::uint64_t degreeCap) {
    if (degreeCap < 1) throw DomainError("formRank: degreeCap must be >= 1");
    RankResult result;
    std::map<std::uint64_t, Complex> memo;
    std::uint64_t cap = degreeCap;
    for (int round = 0; round < 3; ++round, cap *= 2) {
        result.ranksPerCap.push_back(rankAtCap(spec, cap, memo));
        result.finalCap = cap;
    }
    const auto& r = result.ranksPerCap;
    result.rank = r.back();
    result.stabilized = r[0] == r[1] && r[1] == r[2];
    return result;
}

// ---------------------------------------------------------------------------
// Graded norms

namespace {

// Enumerate kappa supported on `vars` with |kappa| = m, accumulating
// |Lambda(z^kappa)|^2.
void gradedExactRecurse(const HelsonFormSpec& spec, const std::vector<std::uint32_t>& vars,
                        std::size_t idx, std::uint32_t remaining,
                        std::vector<MultiIndex::Entry>& partial, double& total) {
    if (remaining == 0 || idx == vars.size()) {
        if (remaining != 0) return;
        const Complex v = formAlphaKappa(spec, MultiIndex::fromEntries(partial));
        total += std::norm(v);
        return;
    }
    for (std::uint32_t e = 0; e <= remaining; ++e) {
        if (e > 0) partial.push_back({vars[idx], e});
        gradedExactRecurse(spec, vars, idx + 1, remaining - e, partial, total);
        if (e > 0) partial.pop_back();
    }
}

struct DyadicAccumulator {
    std::vector<double> blockSums; // block b holds n in (2^{b-1}, 2^b]; n = 1 is block 0
    double total = 0.0;

    void feed(std::uint64_t n, double value) {
        std::size_t block = 0;
        while ((1ULL << block) < n) ++block;
        if (blockSums.size() <= block) blockSums.resize(block + 1, 0.0);
        blockSums[block] += value;
        total += value;
    }

    void finish(GradedNormResult& out) const {
        out.value = total;
        out.dyadicPartials.clear();
        double run = 0.0;
        for (double b : blockSums) {
            run += b;
            out.dyadicPartials.push_back(run);
        }
        const std::size_t K = blockSums.size();
        out.divergent = false;
        out.tailEstimate = 0.0;
        if (K >= 4) {
            const double i1 = blockSums[K - 3], i2 = blockSums[K - 2], i3 = blockSums[K - 1];
            if (i3 > 0.0 && i3 >= 0.999 * i2 && i2 >= 0.999 * i1) out.divergent = true;
            if (!out.divergent && i2 > i3 && i3 > 0.0) out.tailEstimate = i3 * i3 / (i2 - i3);
        }
    }
};

bool pureBohrEvaluations(const HelsonFormSpec& spec) {
    for (const auto& t : spec.terms())
        if (!t.point.isBohr() || t.op.order() != 0) return false;
    return true;
}

} // namespace

GradedNormResult gradedNorm(const HelsonFormSpec& spec, std::uint32_t m, std::uint64_t cutoff) {
    GradedNormResult result;
    if (spec.allPointsExplicit()) {
        auto [vars, exhaustive] = spec.activeVariables();
        (void)exhaustive; // explicit points imply a finite active set
        double total = 0.0;
        std::vector<MultiIndex::Entry> partial;
        gradedExactRecurse(spec, vars, 0, m, partial, total);
        result.value = total;
        result.exact = true;
        return result;
    }

    DyadicAccumulator acc;
    for (std::uint64_t n = 1; n <= cutoff; ++n) {
        const MultiIndex kappa = factorize(n);
        if (kappa.degree() != m) continue;
        acc.feed(n, std::norm(formAlphaKappa(spec, kappa)));
    }
    acc.finish(result);
    return result;
}

GradedNormResult totalGradedMass(const HelsonFormSpec& spec, std::uint64_t cutoff) {
    GradedNormResult result;
    if (spec.allPointsExplicit()) {
        auto [vars, exhaustive] = spec.activeVariables();
        (void)exhaustive;
        // Sum the finitely many grades that can be nonzero... every grade
        // contributes for order-0 terms, so sum grades until the increment
        // underflows.
        double total = 0.0;
        for (std::uint32_t m = 0; m < 512; ++m) {
            double grade = 0.0;
            std::vector<MultiIndex::Entry> partial;
            gradedExactRecurse(spec, vars, 0, m, partial, grade);
            total += grade;
            if (grade <= 1e-18 * std::max(total, 1e-300) && m > spec.maxOrder()) break;
        }
        result.value = total;
        result.exact = true;
        return result;
    }

    DyadicAccumulator acc;
    if (pureBohrEvaluations(spec)) {
        // Lambda(z^kappa(n)) = sum_l scalar_l n^{-s_l}; no factorization needed.
        std::vector<std::pair<Complex, double>> atoms;
        for (const auto& t : spec.terms())
            atoms.emplace_back(t.op.scalar, t.point.bohrExponent());
        for (std::uint64_t n = 1; n <= cutoff; ++n) {
            Complex v(0.0, 0.0);
            const double x = static_cast<double>(n);
            for (const auto& [c, s] : atoms) v += c * std::pow(x, -s);
            acc.feed(n, std::norm(v));
        }
    } else {
        for (std::uint64_t n = 1; n <= cutoff; ++n)
            acc.feed(n, std::norm(formAlphaKappa(spec, factorize(n))));
    }
    acc.finish(result);
    return result;
}

// ---------------------------------------------------------------------------
// Boundedness

BoundednessReport boundednessCheck(const HelsonFormSpec& spec) {
    BoundednessReport report;
    report.bounded = true;
    for (const auto& t : spec.terms()) {
        bool ok = true;
        if (t.point.isBohr()) {
            ok = t.point.bohrExponent() > 0.5;
            if (!ok) report.reason = "Bohr point with s <= 1/2 lies outside the polydisc l^2 set";
        }
        // Explicit points satisfy |lambda_j| < 1 by construction and have
        // finite support, hence lie in l^2; finite directions are always l^2.
        report.termOk.push_back(ok);
        report.bounded = report.bounded && ok;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Symbols

namespace {

void requireSymbolSupported(const HelsonFormSpec& spec) {
    if (!boundednessCheck(spec).bounded)
        throw ContractError("symbol: spec fails the boundedness check");
    if (spec.hasTangentLog())
        throw UnsupportedInputError(
            "symbol: tangential log directions are outside the closed-form kernel calculus");
}

// Invokes fn(multiset r of positions, product of conj direction components)
// for every assignment of each direction to one coordinate of its support.
// A direction with empty support annihilates the term: no assignments.
template <typename Fn>
void forEachAssignment(const std::vector<Direction>& dirs, Fn&& fn) {
    for (const auto& d : dirs)
        if (d.components().empty()) return;
    std::vector<std::size_t> pick(dirs.size(), 0);
    while (true) {
        Complex weight(1.0, 0.0);
        std::map<std::uint32_t, std::uint32_t> multiplicity;
        for (std::size_t m = 0; m < dirs.size(); ++m) {
            const auto& comp = dirs[m].components()[pick[m]];
            weight *= std::conj(comp.value);
            multiplicity[comp.position] += 1;
        }
        fn(multiplicity, weight);
        std::size_t m = dirs.size();
        bool advanced = false;
        while (m > 0) {
            --m;
            if (++pick[m] < dirs[m].components().size()) {
                advanced = true;
                break;
            }
            pick[m] = 0;
        }
        if (!advanced) break;
    }
}

} // namespace

Complex symbolEval(const HelsonFormSpec& spec, const Point& w) {
    requireSymbolSupported(spec);
    Complex total(0.0, 0.0);
    for (const auto& term : spec.terms()) {
        const double base = kernel(w, term.point); // real points, real kernel
        Complex termValue(0.0, 0.0);
        if (term.op.order() == 0) {
            termValue = base;
        } else {
            forEachAssignment(term.op.directions, [&](const std::map<std::uint32_t, std::uint32_t>& mult,
                                                      Complex weight) {
                // Each coordinate with r derivatives contributes
                // r! w_j^r (1 - w_j lambda_j)^{-r}; the undifferentiated
                // factors are already inside the kernel value.
                Complex v = weight;
                for (const auto& [pos, r] : mult) {
                    const double wj = w.coordinate(pos);
                    const double lj = term.point.coordinate(pos);
                    v *= factorialD(r) * powInt(wj, r) / powInt(1.0 - wj * lj, r);
                }
                termValue += v;
            });
            termValue *= base;
        }
        total += std::conj(term.op.scalar) * termValue;
    }
    return total;
}

Complex symbolTaylor(const HelsonFormSpec& spec, const MultiIndex& kappa) {
    requireSymbolSupported(spec);
    Complex total(0.0, 0.0);
    for (const auto& term : spec.terms()) {
        Complex termValue(0.0, 0.0);
        auto coefficient = [&](const std::map<std::uint32_t, std::uint32_t>& mult) {
            // prod_j r_j! C(kappa_j, r_j) lambda_j^{kappa_j - r_j} over the
            // union of supp(kappa) and the assignment.
            double v = 1.0;
            for (const auto& e : kappa.entries()) {
                const auto it = mult.find(e.position);
                const std::uint32_t r = it == mult.end() ? 0 : it->second;
                if (r > e.exponent) return 0.0;
                const double lj = term.point.coordinate(e.position);
                v *= factorialD(r) * binomial(e.exponent, r) * powInt(lj, e.exponent - r);
                if (v == 0.0) return 0.0;
            }
            for (const auto& [pos, r] : mult)
                if (kappa.exponentAt(pos) == 0) return 0.0; // w_j^r with kappa_j = 0
            return v;
        };
        if (term.op.order() == 0) {
            termValue = coefficient({});
        } else {
            forEachAssignment(term.op.directions,
                              [&](const std::map<std::uint32_t, std::uint32_t>& mult, Complex weight) {
                                  termValue += weight * coefficient(mult);
                              });
        }
        total += std::conj(term.op.scalar) * termValue;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Symmetric tensors

SymmetricTensorRep::SymmetricTensorRep(std::uint32_t order, std::vector<Term> terms)
    : order_(order) {
    if (order == 0) throw DomainError("SymmetricTensorRep: order must be >= 1");
    for (auto& t : terms) {
        if (t.factors.size() != order)
            throw DomainError("SymmetricTensorRep: every term needs exactly `order` factors");
        for (const auto& f : t.factors)
            if (f.isTangentLog())
                throw DomainError("SymmetricTensorRep: factors must be finite directions");
        if (t.scalar != Complex(0.0, 0.0)) terms_.push_back(std::move(t));
    }
}

Complex SymmetricTensorRep::evaluate(std::span<const std::uint32_t> tuple) const {
    if (tuple.size() != order_) throw ContractError("SymmetricTensorRep: tuple length != order");
    Complex total(0.0, 0.0);
    for (const auto& term : terms_) {
        Complex v = term.scalar;
        for (std::uint32_t i = 0; i < order_ && v != Complex(0.0, 0.0); ++i)
            v *= term.factors[i].componentAt(tuple[i]);
        total += v;
    }
    return total;
}

std::vector<std::uint32_t> SymmetricTensorRep::support() const {
    std::set<std::uint32_t> s;
    for (const auto& term : terms_)
        for (const auto& f : term.factors)
            for (const auto& c : f.components()) s.insert(c.position);
    return std::vector<std::uint32_t>(s.begin(), s.end());
}

namespace {

// Lexicographic order on factor sequences; used to merge duplicates.
bool factorsLess(const std::vector<Direction>& a, const std::vector<Direction>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto& ca = a[i].components();
        const auto& cb = b[i].components();
        for (std::size_t j = 0; j < std::min(ca.size(), cb.size()); ++j) {
            if (ca[j].position != cb[j].position) return ca[j].position < cb[j].position;
            if (ca[j].value.real() != cb[j].value.real()) return ca[j].value.real() < cb[j].value.real();
            if (ca[j].value.imag() != cb[j].value.imag()) return ca[j].value.imag() < cb[j].value.imag();
        }
        if (ca.size() != cb.size()) return ca.size() < cb.size();
    }
    return false;
}

bool factorsEqual(const std::vector<Direction>& a, const std::vector<Direction>& b) {
    return !factorsLess(a, b) && !factorsLess(b, a);
}

} // namespace

SymmetricTensorRep sym(const SymmetricTensorRep& rep) {
    const std::uint32_t m = rep.order();
    if (m > 8) throw DomainError("sym: order too large to expand permutations");
    double mFact = factorialD(m);

    std::vector<SymmetricTensorRep::Term> expanded;
    std::vector<std::uint32_t> perm(m);
    for (const auto& term : rep.terms()) {
        std::iota(perm.begin(), perm.end(), 0);
        do {
            SymmetricTensorRep::Term t;
            t.scalar = term.scalar / mFact;
            t.factors.reserve(m);
            for (std::uint32_t i = 0; i < m; ++i) t.factors.push_back(term.factors[perm[i]]);
            expanded.push_back(std::move(t));
        } while (std::next_permutation(perm.begin(), perm.end()));
    }

    std::stable_sort(expanded.begin(), expanded.end(),
                     [](const auto& a, const auto& b) { return factorsLess(a.factors, b.factors); });
    std::vector<SymmetricTensorRep::Term> merged;
    for (auto& t : expanded) {
        if (!merged.empty() && factorsEqual(merged.back().factors, t.factors)) {
            merged.back().scalar += t.scalar;
        } else {
            merged.push_back(std::move(t));
        }
    }
    std::erase_if(merged, [](const auto& t) { return t.scalar == Complex(0.0, 0.0); });
    return SymmetricTensorRep(m, std::move(merged));
}

namespace {

// Enumerates support^(m-1) tuples for the prefix matrix columns.
std::vector<std::vector<std::uint32_t>> prefixTuples(const std::vector<std::uint32_t>& support,
                                                     std::uint32_t len) {
    std::vector<std::vector<std::uint32_t>> tuples;
    if (len == 0) {
        tuples.push_back({});
        return tuples;
    }
    double count = 1.0;
    for (std::uint32_t i = 0; i < len; ++i) count *= static_cast<double>(support.size());
    if (count > 2e5) throw DomainError("canonicalize: prefix index set too large");
    std::vector<std::uint32_t> idx(len, 0);
    while (true) {
        std::vector<std::uint32_t> tuple(len);
        for (std::uint32_t i = 0; i < len; ++i) tuple[i] = support[idx[i]];
        tuples.push_back(std::move(tuple));
        std::uint32_t i = len;
        bool advanced = false;
        while (i > 0) {
            --i;
            if (++idx[i] < support.size()) {
                advanced = true;
                break;
            }
            idx[i] = 0;
        }
        if (!advanced) break;
    }
    return tuples;
}

} // namespace

SymmetricTensorRep canonicalize(const SymmetricTensorRep& rep) {
    const std::uint32_t m = rep.order();
    std::vector<SymmetricTensorRep::Term> terms = rep.terms();

    while (terms.size() > 1) {
        const std::size_t L = terms.size();
        // Support may shrink as terms merge; recompute each round.
        SymmetricTensorRep current(m, terms);
        const auto support = current.support();
        if (support.empty()) {
            terms.clear();
            break;
        }
        const auto tuples = prefixTuples(support, m - 1);
        const std::size_t C = tuples.size();

        // Prefix rows with the scalar folded in: P_l = scalar_l * c_1 (x) ... (x) c_{m-1}.
        std::vector<std::vector<Complex>> rows(L, std::vector<Complex>(C));
        std::vector<double> rowNorm(L, 0.0);
        for (std::size_t l = 0; l < L; ++l) {
            for (std::size_t t = 0; t < C; ++t) {
                Complex v = terms[l].scalar;
                for (std::uint32_t i = 0; i + 1 < m; ++i)
                    v *= terms[l].factors[i].componentAt(tuples[t][i]);
                rows[l][t] = v;
                rowNorm[l] += std::norm(v);
            }
            rowNorm[l] = std::sqrt(rowNorm[l]);
        }

        // Incremental Gaussian reduction, tracking combinations of original
        // rows, until some prefix is expressed through the earlier ones.
        struct BasisRow {
            std::vector<Complex> row;
            std::vector<Complex> combo;
            std::size_t pivot;
        };
        std::vector<BasisRow> basis;
        std::ptrdiff_t dependentRow = -1;
        std::vector<Complex> dependentCombo;

        for (std::size_t l = 0; l < L; ++l) {
            std::vector<Complex> row = rows[l];
            std::vector<Complex> combo(L, Complex(0.0, 0.0));
            combo[l] = Complex(1.0, 0.0);
            for (const auto& b : basis) {
                const Complex factor = row[b.pivot] / b.row[b.pivot];
                if (factor == Complex(0.0, 0.0)) continue;
                for (std::size_t t = 0; t < C; ++t) row[t] -= factor * b.row[t];
                for (std::size_t t = 0; t < L; ++t) combo[t] -= factor * b.combo[t];
            }
            double residual = 0.0;
            std::size_t pivot = 0;
            double best = 0.0;
            for (std::size_t t = 0; t < C; ++t) {
                const double a = std::abs(row[t]);
                residual += a * a;
                if (a > best) {
                    best = a;
                    pivot = t;
                }
            }
            residual = std::sqrt(residual);
            if (residual <= 1e-10 * std::max(rowNorm[l], 1e-300)) {
                dependentRow = static_cast<std::ptrdiff_t>(l);
                dependentCombo = std::move(combo);
                break;
            }
            basis.push_back({std::move(row), std::move(combo), pivot});
        }

        if (dependentRow < 0) break; // prefixes linearly independent

        const std::size_t r = static_cast<std::size_t>(dependentRow);
        // combo says sum_i combo_i P_i = 0 with combo_r = 1, so
        // P_r = -sum_{i != r} combo_i P_i and gamma_i = -combo_i.
        std::vector<SymmetricTensorRep::Term> next;
        for (std::size_t l = 0; l < L; ++l) {
            if (l == r) continue;
            const Complex gamma = -dependentCombo[l];
            SymmetricTensorRep::Term t = terms[l];
            if (gamma != Complex(0.0, 0.0) && rowNorm[r] > 0.0) {
                t.factors[m - 1] = Direction::sum(t.factors[m - 1], terms[r].factors[m - 1], gamma);
                if (t.factors[m - 1].components().empty()) continue; // cancelled away
            }
            next.push_back(std::move(t));
        }
        terms = std::move(next);
        if (terms.empty()) break;
    }

    return SymmetricTensorRep(m, std::move(terms));
}

} // namespace helson
