#include "helson/index.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>

namespace helson {

namespace {

// Append-only prime table. Growth publishes a fresh immutable vector through
// a shared_ptr swap, so readers holding a snapshot never observe a partially
// written entry.
class PrimeTable {
public:
    static PrimeTable& instance() {
        static PrimeTable table;
        return table;
    }

    std::shared_ptr<const std::vector<std::uint64_t>> snapshotWithCount(std::size_t count) {
        auto current = load();
        if (current->size() >= count) return current;
        return grow([count](const std::vector<std::uint64_t>& t) { return t.size() >= count; });
    }

    // Snapshot guaranteed to contain every prime <= bound.
    std::shared_ptr<const std::vector<std::uint64_t>> snapshotWithBound(std::uint64_t bound) {
        auto current = load();
        if (current->back() >= bound) return current;
        return grow([bound](const std::vector<std::uint64_t>& t) { return t.back() >= bound; });
    }

private:
    PrimeTable() {
        auto seed = std::make_shared<std::vector<std::uint64_t>>(
            std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31});
        sievedUpTo_ = 32;
        store(seed);
    }

    std::shared_ptr<const std::vector<std::uint64_t>> load() const {
        std::lock_guard<std::mutex> guard(ptrMutex_);
        return table_;
    }

    void store(std::shared_ptr<const std::vector<std::uint64_t>> t) {
        std::lock_guard<std::mutex> guard(ptrMutex_);
        table_ = std::move(t);
    }

    template <typename Done>
    std::shared_ptr<const std::vector<std::uint64_t>> grow(Done done) {
        std::lock_guard<std::mutex> growGuard(growMutex_);
        auto current = load();
        while (!done(*current)) {
            current = sieveNextSegment(*current);
            store(current);
        }
        return current;
    }

    // Sieve of [sievedUpTo_, 2 * sievedUpTo_) against the known primes.
    std::shared_ptr<const std::vector<std::uint64_t>> sieveNextSegment(
        const std::vector<std::uint64_t>& known) {
        const std::uint64_t lo = sievedUpTo_;
        const std::uint64_t hi = lo * 2;
        std::vector<bool> composite(hi - lo, false);
        for (std::uint64_t p : known) {
            if (p * p >= hi) break;
            std::uint64_t first = ((lo + p - 1) / p) * p;
            if (first < p * p) first = p * p;
            for (std::uint64_t m = first; m < hi; m += p) composite[m - lo] = true;
        }
        auto next = std::make_shared<std::vector<std::uint64_t>>(known);
        for (std::uint64_t v = lo; v < hi; ++v)
            if (!composite[v - lo]) next->push_back(v);
        sievedUpTo_ = hi;
        return next;
    }

    mutable std::mutex ptrMutex_;
    std::mutex growMutex_;
    std::shared_ptr<const std::vector<std::uint64_t>> table_;
    std::uint64_t sievedUpTo_ = 0;
};

} // namespace

MultiIndex MultiIndex::fromEntries(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.position < b.position; });
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].position == 0) throw DomainError("MultiIndex: prime positions are 1-based");
        if (entries[i].exponent == 0) throw DomainError("MultiIndex: zero exponents must be omitted");
        if (i > 0 && entries[i].position == entries[i - 1].position)
            throw DomainError("MultiIndex: duplicate prime position");
    }
    MultiIndex k;
    k.entries_ = std::move(entries);
    return k;
}

MultiIndex MultiIndex::unit(std::uint32_t position, std::uint32_t exponent) {
    return fromEntries({Entry{position, exponent}});
}

std::uint32_t MultiIndex::exponentAt(std::uint32_t position) const {
    for (const Entry& e : entries_)
        if (e.position == position) return e.exponent;
    return 0;
}

std::uint64_t MultiIndex::degree() const {
    std::uint64_t d = 0;
    for (const Entry& e : entries_) d += e.exponent;
    return d;
}

std::uint32_t MultiIndex::maxPosition() const {
    return entries_.empty() ? 0 : entries_.back().position;
}

std::vector<std::uint64_t> primes(std::size_t count) {
    if (count == 0) throw DomainError("primes: count must be >= 1");
    auto snap = PrimeTable::instance().snapshotWithCount(count);
    return std::vector<std::uint64_t>(snap->begin(), snap->begin() + count);
}

std::shared_ptr<const std::vector<std::uint64_t>> primeSnapshot(std::size_t count) {
    if (count == 0) count = 1;
    return PrimeTable::instance().snapshotWithCount(count);
}

std::uint64_t nthPrime(std::uint32_t position) {
    if (position == 0) throw DomainError("nthPrime: positions are 1-based");
    auto snap = PrimeTable::instance().snapshotWithCount(position);
    return (*snap)[position - 1];
}

MultiIndex factorize(std::uint64_t n) {
    if (n == 0) throw DomainError("factorize: 0 has no prime factorization");
    std::vector<MultiIndex::Entry> entries;
    if (n == 1) return MultiIndex();

    auto snap = PrimeTable::instance().snapshotWithBound(
        static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n))) + 2);
    const auto& table = *snap;
    for (std::uint32_t pos = 0; pos < table.size() && n > 1; ++pos) {
        const std::uint64_t p = table[pos];
        if (p * p > n) break;
        if (n % p != 0) continue;
        std::uint32_t exponent = 0;
        while (n % p == 0) {
            n /= p;
            ++exponent;
        }
        entries.push_back({pos + 1, exponent});
    }
    if (n > 1) {
        // Remaining cofactor is prime; locate its position, growing the table
        // if needed.
        auto wide = PrimeTable::instance().snapshotWithBound(n);
        auto it = std::lower_bound(wide->begin(), wide->end(), n);
        entries.push_back({static_cast<std::uint32_t>(it - wide->begin()) + 1, 1});
    }
    return MultiIndex::fromEntries(std::move(entries));
}

std::uint64_t compose(const MultiIndex& kappa) {
    std::uint64_t n = 1;
    for (const auto& e : kappa.entries()) {
        const std::uint64_t p = nthPrime(e.position);
        for (std::uint32_t i = 0; i < e.exponent; ++i) {
            std::uint64_t next;
            if (__builtin_mul_overflow(n, p, &next))
                throw OverflowError("compose: product exceeds 64-bit range");
            n = next;
        }
    }
    return n;
}

MultiIndex multiindexAdd(const MultiIndex& a, const MultiIndex& b) {
    std::vector<MultiIndex::Entry> merged;
    merged.reserve(a.entries().size() + b.entries().size());
    auto ia = a.entries().begin(), ea = a.entries().end();
    auto ib = b.entries().begin(), eb = b.entries().end();
    while (ia != ea || ib != eb) {
        if (ib == eb || (ia != ea && ia->position < ib->position)) {
            merged.push_back(*ia++);
        } else if (ia == ea || ib->position < ia->position) {
            merged.push_back(*ib++);
        } else {
            merged.push_back({ia->position, ia->exponent + ib->exponent});
            ++ia;
            ++ib;
        }
    }
    return MultiIndex::fromEntries(std::move(merged));
}

double logCompose(const MultiIndex& kappa) {
    double s = 0.0;
    for (const auto& e : kappa.entries())
        s += static_cast<double>(e.exponent) * std::log(static_cast<double>(nthPrime(e.position)));
    return s;
}

} // namespace helson
