#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "modcm/bounds.hpp"
#include "modcm/numfield.hpp"
#include "modcm/util.hpp"

namespace modcm::density {

inline constexpr uint64_t kPointCap = 1'000'000'000;  // enumeration (streaming) cap per disk
inline constexpr int64_t kColumnCap = 200'000'000;    // cap on y-columns for counting scans

/// An archimedean box over an imaginary quadratic field: the lattice points
/// alpha in O_K with |sigma(alpha)| < Y (strict), both embeddings giving the
/// same absolute value.
struct DiskSpec {
    numfield::FieldDescriptor d;
    mpq_class Y;
};

/// Validates: quadratic descriptor, Y >= 1.
DiskSpec make_disk(const numfield::FieldDescriptor& d, const mpq_class& Y);

/// |x + y*omega| under the complex embedding, as a double. Membership tests
/// never use this; they compare squared norms scaled to integers.
double embedding_abs(const numfield::OKElement& a, const numfield::FieldDescriptor& d);

/// Lattice-point view of a disk. Counting walks one contiguous x-interval per
/// y-column; boundary comparisons are exact integer arithmetic throughout.
class Disk {
public:
    explicit Disk(DiskSpec spec);

    const DiskSpec& spec() const { return spec_; }

    /// Exact point count by column scan (O(Y) work, kColumnCap guard).
    uint64_t count() const;

    /// Counts split by residue class (x mod 5) + 5*(y mod 5).
    std::array<uint64_t, 25> class_counts() const;

    /// Streams every point as (x, y) coordinates, y-major ascending order.
    /// Subject to the kPointCap enumeration cap.
    void for_each(const std::function<void(int64_t, int64_t)>& fn) const;

    /// Throws cap_exceeded unless the point count is within kPointCap.
    void require_enumerable() const;

    /// Exact strict membership test.
    bool contains(int64_t x, int64_t y) const;

    /// Uniform draw by rejection from the covering coordinate box.
    numfield::OKElement sample(util::SplitMix64& rng) const;

private:
    DiskSpec spec_;
    int64_t m_;
    bool half_;
    mpz_class yn2_;       // Yn^2 (non-half) or 4*Yn^2 (half), with Y = Yn/Yd
    mpz_class yd2_;       // Yd^2
    int64_t box_x_, box_y_; // covering box half-widths
    void check_column_cap() const;
    friend class PairSampler;
};

std::vector<numfield::OKElement> enumerate_disk(const DiskSpec& spec);

/// Joint residue tuples of disk points across the primes above 5. The tuple
/// index encodes per-map element indices in base q = 5^f, map 0 least
/// significant.
struct ResidueDistribution {
    std::vector<uint64_t> counts;
    uint64_t total;
    uint64_t max_count() const;
    uint64_t min_count() const;
};

ResidueDistribution residue_distribution(const DiskSpec& spec, const std::vector<numfield::ReductionMap>& maps);

/// Deterministic sampler of coefficient pairs from the box product
/// O_{K,X^4} x O_{K,X^6}.
class PairSampler {
public:
    PairSampler(const numfield::FieldDescriptor& d, const mpq_class& X);
    numfield::OKPair draw(util::SplitMix64& rng) const;
    const Disk& disk_a() const { return a_; }
    const Disk& disk_b() const { return b_; }

private:
    Disk a_;
    Disk b_;
};

struct MonteCarloStats {
    uint64_t samples = 0;
    uint64_t passes = 0;
    uint64_t seed = 0;
    util::Interval ci{0.0, 0.0};
};

/// Empirical share of coefficient pairs passing the good-ordinary residue
/// criterion at every prime above 5 (A mod p nonzero and Delta(A,B) mod p
/// nonzero), against the theoretical lower bound (1 - 1/5^f)^{2r}.
struct DensityReport {
    numfield::FieldDescriptor field;
    mpq_class X;
    std::string mode; // "exact" | "mc"
    uint64_t countA = 0;
    uint64_t countB = 0;
    mpz_class pair_total; // |E'_X| = countA * countB
    std::optional<uint64_t> delta_zero_pairs; // exact mode only
    std::optional<uint64_t> ex_size;          // |E_X| = pair_total - delta_zero_pairs
    mpq_class empirical_exact;                // exact mode: exact proportion
    double empirical_density = 0.0;
    bounds::BoundResult theoretical;
    std::vector<mpq_class> per_prime_exact; // exact mode
    std::vector<double> per_prime;
    std::optional<MonteCarloStats> mc;
};

/// Exact residue-criterion density over E'_X by per-coordinate residue
/// weighting: two disk scans and a 25 x 25 class sum instead of a pair loop.
DensityReport ordinary_density_exact(const numfield::FieldDescriptor& d, const mpq_class& X);

/// Monte Carlo estimate with a Wilson 95% interval; reproducible from the
/// seed via per-sample SplitMix64 substreams. samples >= 1000.
DensityReport montecarlo_density(const numfield::FieldDescriptor& d, const mpq_class& X, uint64_t samples,
                                 uint64_t seed);

struct EXCount {
    uint64_t countA;
    uint64_t countB;
    uint64_t pair_total;      // |E'_X|
    uint64_t delta_zero_pairs;
    uint64_t ex_size;         // |E_X|
};

/// |E'_X| and |E_X|: discriminant-zero pairs are found by solving
/// B^2 = -4A^3/27 exactly in K for each A and testing integrality and disk
/// membership of the roots.
EXCount count_EX(const numfield::FieldDescriptor& d, const mpq_class& X);

} // namespace modcm::density
