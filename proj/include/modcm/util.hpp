#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <gmpxx.h>

namespace modcm::util {

// ---------------------------------------------------------------------------
// Deterministic RNG.
//
// All randomness in the library flows through SplitMix64 substreams: the
// result of stream k depends only on (seed, k), never on how work is split
// across threads. The generator and the substream derivation are part of the
// reproducibility contract and must not change.
// ---------------------------------------------------------------------------

struct SplitMix64 {
    uint64_t state;

    uint64_t next() {
        state += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw from [0, bound) by 64-bit modulo rejection.
    uint64_t below(uint64_t bound);

    /// Uniform draw from [lo, hi] inclusive.
    int64_t in_range(int64_t lo, int64_t hi);
};

/// Substream `stream` of a master seed; see SplitMix64 notes above.
SplitMix64 substream(uint64_t seed, uint64_t stream);

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

struct Interval {
    double lo;
    double hi;

    bool contains(double v) const { return lo <= v && v <= hi; }
    bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

/// Wilson 95% score interval for `successes` out of `trials`.
Interval wilson95(uint64_t successes, uint64_t trials);

// ---------------------------------------------------------------------------
// Parallel helpers. Worker count comes from MODCM_WORKERS (default: hardware);
// results are combined in chunk order, so the outcome never depends on it.
// ---------------------------------------------------------------------------

int worker_count();

namespace detail {
std::vector<std::pair<int64_t, int64_t>> chunk_ranges(int64_t n, int chunks);
}

/// Splits [0, n) into contiguous chunks, runs `fn(begin, end)` on each worker
/// and combines the returned accumulators in ascending chunk order.
template <typename Acc, typename Fn, typename Combine>
Acc parallel_chunks(int64_t n, const Fn& fn, const Combine& combine);

// ---------------------------------------------------------------------------
// Small number theory over machine integers
// ---------------------------------------------------------------------------

bool is_prime_u64(uint64_t n);
std::vector<int64_t> primes_up_to(int64_t limit);
bool is_squarefree(int64_t n);
int64_t euler_phi(int64_t n);
uint64_t pow_mod_u64(uint64_t base, uint64_t exp, uint64_t mod);
int64_t multiplicative_order(int64_t a, int64_t n); // order of a in (Z/n)^*, requires gcd(a,n)=1
std::vector<int64_t> divisors(int64_t n);

// ---------------------------------------------------------------------------
// Exact rationals
// ---------------------------------------------------------------------------

/// Parses a plain decimal literal ("4", "2.5", "0.125") into an exact rational.
mpq_class parse_decimal(const std::string& text);

/// Correctly rounded decimal string with 12 significant digits, trailing
/// zeros trimmed. Domain: 0 < v < 1 (the bound values live there).
std::string decimal12(const mpq_class& v);

/// Nearest double to an exact rational (ties to even).
double to_double_nearest(const mpq_class& v);

/// Exact rational equal to a finite double.
mpq_class from_double_exact(double v);

} // namespace modcm::util

#include <future>

namespace modcm::util {

template <typename Acc, typename Fn, typename Combine>
Acc parallel_chunks(int64_t n, const Fn& fn, const Combine& combine) {
    if (n <= 0) return fn(int64_t{0}, int64_t{0});
    int workers = worker_count();
    if (workers == 1 || n < 1024) return fn(int64_t{0}, n);

    auto ranges = detail::chunk_ranges(n, workers);
    std::vector<std::future<Acc>> futs;
    futs.reserve(ranges.size());
    for (auto [begin, end] : ranges)
        futs.push_back(std::async(std::launch::async, [&fn, begin = begin, end = end] { return fn(begin, end); }));
    Acc total = futs[0].get();
    for (size_t c = 1; c < futs.size(); ++c) {
        Acc part = futs[c].get();
        combine(total, part);
    }
    return total;
}

} // namespace modcm::util
