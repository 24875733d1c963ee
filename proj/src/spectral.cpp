#include "helson/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>

namespace helson {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Householder reduction of a symmetric matrix to tridiagonal form. `a` is
// row-major dim x dim and is overwritten; with `vectors` it ends up holding
// the accumulated orthogonal transformation Q (A = Q T Q^T).
void tridiagonalize(std::vector<double>& a, std::size_t n, std::vector<double>& d,
                    std::vector<double>& e, bool vectors) {
    auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };
    d.assign(n, 0.0);
    e.assign(n, 0.0);

    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (std::size_t k = 0; k < i; ++k) scale += std::abs(at(i, k));
            if (scale == 0.0) {
                e[i] = at(i, l);
            } else {
                for (std::size_t k = 0; k < i; ++k) {
                    at(i, k) /= scale;
                    h += at(i, k) * at(i, k);
                }
                double f = at(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                at(i, l) = f - g;
                f = 0.0;
                for (std::size_t j = 0; j < i; ++j) {
                    if (vectors) at(j, i) = at(i, j) / h;
                    g = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) g += at(j, k) * at(i, k);
                    for (std::size_t k = j + 1; k < i; ++k) g += at(k, j) * at(i, k);
                    e[j] = g / h;
                    f += e[j] * at(i, j);
                }
                const double hh = f / (h + h);
                for (std::size_t j = 0; j < i; ++j) {
                    f = at(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (std::size_t k = 0; k <= j; ++k) at(j, k) -= f * e[k] + g * at(i, k);
                }
            }
        } else {
            e[i] = at(i, l);
        }
        d[i] = h;
    }
    if (vectors) d[0] = 0.0;
    e[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (vectors) {
            if (d[i] != 0.0) {
                for (std::size_t j = 0; j < i; ++j) {
                    double g = 0.0;
                    for (std::size_t k = 0; k < i; ++k) g += at(i, k) * at(k, j);
                    for (std::size_t k = 0; k < i; ++k) at(k, j) -= g * at(k, i);
                }
            }
            d[i] = at(i, i);
            at(i, i) = 1.0;
            for (std::size_t j = 0; j < i; ++j) at(j, i) = at(i, j) = 0.0;
        } else {
            d[i] = at(i, i);
        }
    }
}

// Implicit-shift QL with Wilkinson shifts on a tridiagonal matrix (diagonal
// d, subdiagonal e with e[0] unused on input). When z is non-null (rows x n,
// row-major), the rotations are accumulated into its columns. At most
// `maxSweeps` sweeps per eigenvalue.
void tridiagonalQL(std::vector<double>& d, std::vector<double>& e, std::size_t n, double* z,
                   std::size_t rows, int maxSweeps) {
    if (n == 0) return;
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= kEps * dd) break;
            }
            if (m != l) {
                if (iter++ == maxSweeps)
                    throw NumericalError("tridiagonalQL: too many sweeps");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    e[i + 1] = r = std::hypot(f, g);
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    d[i + 1] = g + (p = s * r);
                    g = c * r - b;
                    if (z) {
                        for (std::size_t k = 0; k < rows; ++k) {
                            f = z[k * n + i + 1];
                            z[k * n + i + 1] = s * z[k * n + i] + c * f;
                            z[k * n + i] = c * z[k * n + i] - s * f;
                        }
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

void sortAscendingWithColumns(std::vector<double>& values, double* z, std::size_t rows,
                              std::size_t cols) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> sorted(values.size());
    for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = values[order[i]];
    values = std::move(sorted);
    if (z) {
        std::vector<double> permuted(rows * cols);
        for (std::size_t i = 0; i < cols; ++i)
            for (std::size_t r = 0; r < rows; ++r) permuted[r * cols + i] = z[r * cols + order[i]];
        std::copy(permuted.begin(), permuted.end(), z);
    }
}

void flagNumericallyZero(SpectralResult& res) {
    double maxAbs = 0.0;
    for (double v : res.eigenvalues) maxAbs = std::max(maxAbs, std::abs(v));
    res.numericallyZero.assign(res.eigenvalues.size(), false);
    for (std::size_t i = 0; i < res.eigenvalues.size(); ++i)
        res.numericallyZero[i] = std::abs(res.eigenvalues[i]) < 1e-12 * maxAbs;
}

} // namespace

std::string SpectralResult::toCsv() const {
    std::string out;
    char buf[80];
    for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
        const double r = i < residualBounds.size() ? residualBounds[i] : 0.0;
        std::snprintf(buf, sizeof(buf), "%.16e,%.16e\n", eigenvalues[i], r);
        out += buf;
    }
    return out;
}

SpectralResult eigDense(std::span<const double> matrix, std::size_t dim, bool wantVectors) {
    if (dim == 0 || matrix.size() != dim * dim)
        throw ContractError("eigDense: matrix must be dim x dim with dim >= 1");

    double maxAbs = 0.0, maxAsym = 0.0;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i + 1; j < dim; ++j) {
            maxAbs = std::max({maxAbs, std::abs(matrix[i * dim + j])});
            maxAsym = std::max(maxAsym, std::abs(matrix[i * dim + j] - matrix[j * dim + i]));
        }
    for (std::size_t i = 0; i < dim; ++i) maxAbs = std::max(maxAbs, std::abs(matrix[i * dim + i]));
    if (maxAsym > 1e-12 * std::max(maxAbs, 1e-300))
        throw ContractError("eigDense: input is not symmetric within 1e-12 relative");

    std::vector<double> work(matrix.begin(), matrix.end());
    std::vector<double> d, e;
    tridiagonalize(work, dim, d, e, wantVectors);
    tridiagonalQL(d, e, dim, wantVectors ? work.data() : nullptr, dim, 30);

    SpectralResult res;
    res.dimension = dim;
    res.eigenvalues = std::move(d);
    sortAscendingWithColumns(res.eigenvalues, wantVectors ? work.data() : nullptr, dim, dim);
    if (wantVectors) res.eigenvectors = std::move(work);

    // Backward-stability bound for the Householder + QL pipeline.
    double frob = 0.0;
    for (double v : matrix) frob += v * v;
    frob = std::sqrt(frob);
    const double bound = 32.0 * kEps * static_cast<double>(dim) * frob;
    res.residualBounds.assign(dim, bound);
    flagNumericallyZero(res);
    return res;
}

SpectralResult eigDense(const TruncatedMatrix& m, bool wantVectors) {
    return eigDense(m.data(), m.dimension(), wantVectors);
}

SpectralResult eigDense(const HankelTruncation& m, bool wantVectors) {
    return eigDense(m.data(), m.dimension(), wantVectors);
}

SpectralResult lanczosExtreme(const MatVec& op, std::size_t dim, std::size_t k,
                              std::size_t maxIter) {
    if (dim == 0 || k == 0) throw DomainError("lanczosExtreme: dim and k must be >= 1");
    k = std::min(k, dim);
    maxIter = std::min(maxIter, dim);
    if (maxIter < k) maxIter = k;

    std::mt19937_64 rng(0x48656C736F6EULL); // fixed seed: runs are reproducible
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> basis;
    std::vector<double> v(dim), w(dim);
    for (double& x : v) x = uni(rng);
    {
        double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
        for (double& x : v) x /= norm;
    }
    basis.insert(basis.end(), v.begin(), v.end());

    std::vector<double> alphaCoef, betaCoef; // tridiagonal entries (beta has m-1)
    std::vector<double> ritz, ritzResidual, tridiagVecs;
    double normEstimate = 0.0;
    bool converged = false;

    auto solveRitz = [&](double nextBeta) {
        const std::size_t m = alphaCoef.size();
        std::vector<double> d = alphaCoef;
        std::vector<double> e(m, 0.0);
        for (std::size_t i = 1; i < m; ++i) e[i] = betaCoef[i - 1];
        tridiagVecs.assign(m * m, 0.0);
        for (std::size_t i = 0; i < m; ++i) tridiagVecs[i * m + i] = 1.0;
        tridiagonalQL(d, e, m, tridiagVecs.data(), m, 50);
        sortAscendingWithColumns(d, tridiagVecs.data(), m, m);
        ritz = std::move(d);
        ritzResidual.assign(m, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            ritzResidual[i] = std::abs(nextBeta * tridiagVecs[(m - 1) * m + i]);
        normEstimate = std::max(std::abs(ritz.front()), std::abs(ritz.back()));
    };

    auto topKConverged = [&]() {
        if (ritz.size() < k) return false;
        for (std::size_t i = 0; i < k; ++i)
            if (ritzResidual[ritz.size() - 1 - i] > 1e-8 * std::max(normEstimate, 1e-300))
                return false;
        return true;
    };

    for (std::size_t j = 0; j < maxIter; ++j) {
        op(std::span<const double>(basis.data() + j * dim, dim), w);
        const double a = std::inner_product(w.begin(), w.end(), basis.begin() + j * dim, 0.0);
        alphaCoef.push_back(a);

        for (std::size_t i = 0; i < dim; ++i) w[i] -= a * basis[j * dim + i];
        if (j > 0)
            for (std::size_t i = 0; i < dim; ++i) w[i] -= betaCoef[j - 1] * basis[(j - 1) * dim + i];
        // Full reorthogonalization, two classical Gram-Schmidt passes.
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t col = 0; col <= j; ++col) {
                const double* q = basis.data() + col * dim;
                double proj = 0.0;
                for (std::size_t i = 0; i < dim; ++i) proj += w[i] * q[i];
                for (std::size_t i = 0; i < dim; ++i) w[i] -= proj * q[i];
            }
        }
        const double beta = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));

        const std::size_t steps = j + 1;
        const bool lastStep = steps == maxIter || steps == dim;
        const bool breakdown = beta <= 1e3 * kEps * std::max(normEstimate, 1.0);
        const bool checkpoint = steps >= k && (lastStep || breakdown || steps % 8 == 0 || steps == k);

        if (checkpoint || ((breakdown || lastStep) && ritz.empty())) {
            solveRitz(beta);
            if (topKConverged() || breakdown) {
                converged = true;
                break;
            }
            if (lastStep) break; // not converged; best available residuals kept
        } else if (breakdown || lastStep) {
            converged = breakdown;
            break;
        }

        betaCoef.push_back(beta);
        for (double& x : w) x /= beta;
        basis.insert(basis.end(), w.begin(), w.end());
    }

    SpectralResult res;
    res.dimension = dim;
    res.converged = converged;
    const std::size_t m = ritz.size();
    const std::size_t take = std::min(k, m);
    res.eigenvalues.assign(ritz.end() - take, ritz.end());
    res.residualBounds.assign(ritzResidual.end() - take, ritzResidual.end());
    res.eigenvectors.assign(dim * take, 0.0);
    for (std::size_t c = 0; c < take; ++c) {
        const std::size_t src = m - take + c;
        for (std::size_t step = 0; step < m; ++step) {
            const double s = tridiagVecs[step * m + src];
            const double* q = basis.data() + step * dim;
            for (std::size_t i = 0; i < dim; ++i) res.eigenvectors[i * take + c] += s * q[i];
        }
    }
    flagNumericallyZero(res);
    return res;
}

std::optional<double> extrapolateLogSquare(std::span<const NormSchedulePoint> points) {
    if (points.size() < 3) return std::nullopt;
    // Least squares for lambda(N) = limit - slope * x, x = 1/ln^2 N, on the
    // last three points.
    double sx = 0, sxx = 0, sy = 0, sxy = 0;
    const std::size_t n0 = points.size() - 3;
    for (std::size_t i = n0; i < points.size(); ++i) {
        const double ln = std::log(static_cast<double>(points[i].size));
        const double x = 1.0 / (ln * ln);
        sx += x;
        sxx += x * x;
        sy += points[i].lambdaMax;
        sxy += x * points[i].lambdaMax;
    }
    const double det = 3.0 * sxx - sx * sx;
    if (det == 0.0) return std::nullopt;
    return (sxx * sy - sx * sxy) / det;
}

namespace {

double lambdaMaxDense(std::span<const double> data, std::size_t dim) {
    if (dim <= 1024) return eigDense(data, dim).max();
    MatVec op = [data, dim](std::span<const double> x, std::span<double> y) {
        for (std::size_t i = 0; i < dim; ++i) {
            double acc = 0.0;
            const double* row = data.data() + i * dim;
            for (std::size_t j = 0; j < dim; ++j) acc += row[j] * x[j];
            y[i] = acc;
        }
    };
    return lanczosExtreme(op, dim, 1).max();
}

} // namespace

NormScheduleResult normSchedule(const MomentSequence& seq, std::span<const std::uint64_t> sizes,
                                std::uint64_t offset) {
    NormScheduleResult result;
    std::uint64_t prev = 0;
    for (std::uint64_t N : sizes) {
        if (N <= prev) throw DomainError("normSchedule: sizes must be strictly ascending");
        prev = N;
        const TruncatedMatrix m = buildHelson(seq, N, offset);
        result.points.push_back({N, lambdaMaxDense(m.data(), m.dimension())});
    }
    result.extrapolated = extrapolateLogSquare(result.points);
    return result;
}

NormScheduleResult normScheduleHankel1d(const std::function<double(std::uint64_t)>& beta,
                                        std::span<const std::uint64_t> sizes) {
    NormScheduleResult result;
    std::uint64_t prev = 0;
    for (std::uint64_t N : sizes) {
        if (N <= prev) throw DomainError("normScheduleHankel1d: sizes must be strictly ascending");
        prev = N;
        const std::size_t dim = static_cast<std::size_t>(N);
        if (dim <= 1024) {
            result.points.push_back(
                {N, eigDense(buildHankel1d(beta, static_cast<std::uint32_t>(N))).max()});
        } else {
            // One antidiagonal table instead of dense storage.
            std::vector<double> table(2 * dim - 1);
            for (std::size_t s = 0; s < table.size(); ++s) table[s] = beta(s);
            MatVec op = [&table, dim](std::span<const double> x, std::span<double> y) {
                for (std::size_t j = 0; j < dim; ++j) {
                    double acc = 0.0;
                    const double* row = table.data() + j;
                    for (std::size_t kk = 0; kk < dim; ++kk) acc += row[kk] * x[kk];
                    y[j] = acc;
                }
            };
            result.points.push_back({N, lanczosExtreme(op, dim, 1).max()});
        }
    }
    result.extrapolated = extrapolateLogSquare(result.points);
    return result;
}

} // namespace helson
