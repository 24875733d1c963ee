#include "helson/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace helson {

TruncatedMatrix::TruncatedMatrix(std::uint64_t size, std::uint64_t offset, std::vector<double> data)
    : size_(size), offset_(offset), dim_(static_cast<std::size_t>(size - offset + 1)),
      data_(std::move(data)) {
    if (offset != 1 && offset != 2) throw DomainError("TruncatedMatrix: offset must be 1 or 2");
    if (size < offset) throw DomainError("TruncatedMatrix: size must be >= offset");
    if (data_.size() != dim_ * dim_) throw ContractError("TruncatedMatrix: bad storage size");
}

void TruncatedMatrix::apply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != dim_ || y.size() != dim_) throw ContractError("TruncatedMatrix::apply: bad vector size");
    for (std::size_t i = 0; i < dim_; ++i) {
        double acc = 0.0;
        const double* row = data_.data() + i * dim_;
        for (std::size_t j = 0; j < dim_; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

double TruncatedMatrix::frobeniusNorm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
}

TruncatedMatrix buildHelson(const MomentSequence& seq, std::uint64_t N, std::uint64_t offset) {
    if (offset != 1 && offset != 2) throw DomainError("buildHelson: offset must be 1 or 2");
    if (N < offset) throw DomainError("buildHelson: N must be >= offset");
    if (offset == 1 && seq.undefinedAtOne())
        throw DomainError("buildHelson: sequence undefined at n = 1 requires offset 2");

    const std::size_t dim = static_cast<std::size_t>(N - offset + 1);

    // Gather the distinct products of the upper triangle, evaluate alpha once
    // per product, then fill both triangles by lookup.
    std::vector<std::uint64_t> products;
    products.reserve(dim * (dim + 1) / 2);
    for (std::uint64_t n = offset; n <= N; ++n)
        for (std::uint64_t m = n; m <= N; ++m) products.push_back(n * m);
    std::sort(products.begin(), products.end());
    products.erase(std::unique(products.begin(), products.end()), products.end());

    std::vector<double> values(products.size());
    for (std::size_t i = 0; i < products.size(); ++i) values[i] = alpha(seq, products[i]);

    auto lookup = [&](std::uint64_t nm) {
        const auto it = std::lower_bound(products.begin(), products.end(), nm);
        return values[static_cast<std::size_t>(it - products.begin())];
    };

    std::vector<double> data(dim * dim);
    for (std::uint64_t n = offset; n <= N; ++n) {
        const std::size_t i = static_cast<std::size_t>(n - offset);
        for (std::uint64_t m = n; m <= N; ++m) {
            const std::size_t j = static_cast<std::size_t>(m - offset);
            const double v = lookup(n * m);
            data[i * dim + j] = v;
            data[j * dim + i] = v;
        }
    }
    return TruncatedMatrix(N, offset, std::move(data));
}

HankelTruncation::HankelTruncation(std::uint32_t d, std::uint32_t K, const MultiSequence& beta)
    : d_(d), K_(K) {
    if (d == 0 || K == 0) throw DomainError("HankelTruncation: d and K must be >= 1");
    double cells = 1.0;
    for (std::uint32_t i = 0; i < d; ++i) cells *= K;
    if (cells > 1e5) throw DomainError("HankelTruncation: cube K^d too large for dense storage");
    dim_ = 1;
    for (std::uint32_t i = 0; i < d; ++i) dim_ *= K;

    data_.resize(dim_ * dim_);
    std::vector<std::uint32_t> sum(d);
    for (std::size_t i = 0; i < dim_; ++i) {
        const auto row = rowIndex(i);
        for (std::size_t j = i; j < dim_; ++j) {
            const auto col = rowIndex(j);
            for (std::uint32_t v = 0; v < d; ++v) sum[v] = row[v] + col[v];
            const double value = beta(sum);
            data_[i * dim_ + j] = value;
            data_[j * dim_ + i] = value;
        }
    }
}

std::vector<std::uint32_t> HankelTruncation::rowIndex(std::size_t i) const {
    std::vector<std::uint32_t> kappa(d_);
    for (std::uint32_t v = d_; v-- > 0;) {
        kappa[v] = static_cast<std::uint32_t>(i % K_);
        i /= K_;
    }
    return kappa;
}

HankelTruncation buildHankel1d(const std::function<double(std::uint64_t)>& beta, std::uint32_t N) {
    return HankelTruncation(1, N, [&beta](std::span<const std::uint32_t> kappa) {
        return beta(kappa[0]);
    });
}

HankelTruncation buildHankelMulti(const std::function<double(std::uint64_t)>& beta1d,
                                  std::uint32_t d, std::uint32_t K) {
    return HankelTruncation(d, K, [&beta1d](std::span<const std::uint32_t> kappa) {
        double v = 1.0;
        for (std::uint32_t k : kappa) v *= beta1d(k);
        return v;
    });
}

std::vector<double> matvec(const MomentSequence& seq, std::span<const double> x,
                           std::uint64_t N, std::uint64_t offset) {
    const std::size_t dim = static_cast<std::size_t>(N - offset + 1);
    if (x.size() != dim) throw ContractError("matvec: vector length must be N - offset + 1");
    std::vector<double> y(dim, 0.0);
    for (std::uint64_t n = offset; n <= N; ++n) {
        double acc = 0.0;
        for (std::uint64_t m = offset; m <= N; ++m)
            acc += alpha(seq, n * m) * x[static_cast<std::size_t>(m - offset)];
        y[static_cast<std::size_t>(n - offset)] = acc;
    }
    return y;
}

double tensorNorm(std::span<const double> norms) {
    double v = 1.0;
    for (double x : norms) {
        if (x < 0.0) throw DomainError("tensorNorm: norms must be non-negative");
        v *= x;
    }
    return v;
}

std::string matrixToCsv(std::span<const double> data, std::size_t rows, std::size_t cols) {
    if (data.size() != rows * cols) throw ContractError("matrixToCsv: bad shape");
    std::string out;
    out.reserve(rows * cols * 26);
    char buf[40];
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            std::snprintf(buf, sizeof(buf), "%.16e", data[i * cols + j]);
            out += buf;
            out += (j + 1 < cols) ? ',' : '\n';
        }
    }
    return out;
}

} // namespace helson
