#pragma once

/**
 * @file index.hpp
 * @brief Prime enumeration and the bijection n <-> kappa between positive
 *        integers and finitely supported multi-indices.
 *
 * Every n >= 1 factors uniquely as n = prod_j p_j^{kappa_j} over the ordered
 * primes p_1 < p_2 < ..., which identifies the positive integers with the
 * finitely supported exponent vectors kappa. All matrix indexing in this
 * library goes through that identification.
 */

#include <cstdint>
#include <memory>
#include <vector>

#include "helson/errors.hpp"

namespace helson {

/// Finitely supported exponent vector kappa; n = prod p_j^{kappa_j}.
/// Entries are (primePosition, exponent) with 1-based positions strictly
/// increasing and exponents >= 1. The empty list is kappa = 0, i.e. n = 1.
class MultiIndex {
public:
    struct Entry {
        std::uint32_t position; // 1-based index into the ordered primes
        std::uint32_t exponent; // >= 1

        friend auto operator<=>(const Entry&, const Entry&) = default;
    };

    MultiIndex() = default;

    /// Builds from (position, exponent) pairs; validates and normalizes order.
    static MultiIndex fromEntries(std::vector<Entry> entries);

    /// kappa = exponent * e_position.
    static MultiIndex unit(std::uint32_t position, std::uint32_t exponent = 1);

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    /// Exponent at a prime position (0 when the position is absent).
    std::uint32_t exponentAt(std::uint32_t position) const;

    /// Total degree |kappa| = sum of exponents.
    std::uint64_t degree() const;

    /// Largest prime position with a nonzero exponent (0 for kappa = 0).
    std::uint32_t maxPosition() const;

    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
    /// Lexicographic on the entry list; a total order usable as a map key.
    friend auto operator<=>(const MultiIndex& a, const MultiIndex& b) { return a.entries_ <=> b.entries_; }

private:
    std::vector<Entry> entries_;
};

/// First `count` primes in increasing order. The shared prime table grows on
/// demand by a segmented sieve; concurrent readers always see complete
/// entries.
std::vector<std::uint64_t> primes(std::size_t count);

/// Immutable snapshot of the prime table holding at least `count` primes.
std::shared_ptr<const std::vector<std::uint64_t>> primeSnapshot(std::size_t count);

/// The `position`-th prime, 1-based (nthPrime(1) == 2).
std::uint64_t nthPrime(std::uint32_t position);

/// Prime factorization of n as a MultiIndex. Throws DomainError for n = 0.
MultiIndex factorize(std::uint64_t n);

/// n = prod p_j^{kappa_j}. Throws OverflowError if the product leaves the
/// unsigned 64-bit range.
std::uint64_t compose(const MultiIndex& kappa);

/// Componentwise sum; compose(a + b) = compose(a) * compose(b) when in range.
MultiIndex multiindexAdd(const MultiIndex& a, const MultiIndex& b);

/// log(compose(kappa)) computed as sum kappa_j * log(p_j); never overflows.
double logCompose(const MultiIndex& kappa);

} // namespace helson
