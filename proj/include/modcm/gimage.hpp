#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "modcm/numfield.hpp"
#include "modcm/util.hpp"

namespace modcm::gimage {

/// A Frobenius trace at one degree-1 prime above l: N points over F_l and
/// a = l + 1 - N. The eigenvalues of Frobenius are never materialized; a and
/// det = l mod 5 carry everything the mod-5 tests need.
struct FrobSample {
    int64_t l;
    uint32_t prime_index;
    int64_t a;
    uint64_t N;
};

/// Witness accumulator. Each flag, once set by a sample, stays set.
///   nonsquare:   a^2 - 4l is a nonsquare mod 5   (kills Borel-type images)
///   square:      a^2 - 4l a nonzero square mod 5, a != 0 mod 5
///                                                (kills nonsplit-Cartan images)
///   exceptional: a^2 = 3l mod 5, i.e. tr^2/det outside {0,1,2,4}
///                                                (kills the remaining types)
/// Soundness of this rule set against the full subgroup lattice of GL_2(F_5)
/// is established by subgroup_oracle(), not taken on faith.
struct WitnessFlags {
    bool square = false;
    bool nonsquare = false;
    bool exceptional = false;

    bool all() const { return square && nonsquare && exceptional; }
};

/// Per-sample witness contribution for trace a at prime l (gcd(l,5)=1).
WitnessFlags witness_flags(int64_t a, int64_t l);

struct ScanReport {
    std::string curve_id;
    WitnessFlags flags;
    bool certified;        // all three witnesses observed
    uint64_t samples_used; // Frobenius samples consumed
    int64_t L;             // prime bound scanned
};

/// Rational primes l <= L with l not dividing 10*disc(K), splitting
/// completely in K, and with good reduction of (A,B) at every prime above l.
std::vector<int64_t> good_degree1_primes(const numfield::FieldDescriptor& d, const numfield::OKPair& pair,
                                         int64_t L);

/// Reduce (A,B) through the degree-1 map of the given prime above l and count
/// points over F_l. Rejects bad reduction.
FrobSample frob_trace(const numfield::FieldDescriptor& d, const numfield::OKPair& pair, int64_t l,
                      uint32_t prime_index);

/// Scans good degree-1 primes up to L accumulating witnesses. Certification
/// (all three flags) implies the mod-5 image contains SL_2(F_5), relative to
/// the subgroup_oracle table and surjectivity of the determinant (valid for
/// the supported fields, where K and Q(zeta_5) intersect in Q). A
/// non-certified outcome is inconclusive, never a disproof.
ScanReport certify_sl2(const numfield::FieldDescriptor& d, const numfield::OKPair& pair, int64_t L);

/// Brute-force verification of the witness rules: enumerates the full
/// subgroup lattice of GL_2(F_5) by closing the cyclic subgroups under
/// pairwise joins, then checks that every subgroup with surjective
/// determinant that does not contain SL_2(F_5) fails to produce at least one
/// witness type, while GL_2(F_5) itself produces all three.
struct SubgroupOracleReport {
    uint64_t subgroup_count;          // all subgroups of GL_2(F_5)
    uint64_t det_surjective_non_sl2;  // proper, det-surjective, not containing SL_2
    bool every_such_lacks_a_witness;
    bool full_group_has_all_witnesses;

    struct MaximalFamily {
        uint64_t order;
        uint64_t count;                 // conjugates with this signature
        std::array<bool, 3> has;        // {square, nonsquare, exceptional}
    };
    /// Maximal elements among the det-surjective non-SL2 subgroups, grouped
    /// by (order, witness signature).
    std::vector<MaximalFamily> maximal_families;

    /// (order, number of subgroups of that order), ascending by order.
    std::vector<std::pair<uint64_t, uint64_t>> order_histogram;

    bool sound() const { return every_such_lacks_a_witness && full_group_has_all_witnesses; }
};

SubgroupOracleReport subgroup_oracle();

/// Perfectness of SL_2(F_5) by brute force: the multiplicative closure of the
/// commutator set is the whole group of order 120.
bool is_perfect_sl2();

/// Smallest prime l <= Lmax that is decomposed generic for the mod-5
/// representation: l != 5 split completely, good reduction at every v | l,
/// and at each v the trace satisfies a_v^2 != 4l and a_v != +-(1+l) mod 5
/// (the congruence form of the eigenvalue-ratio condition
/// alpha/beta not in {1, l, 1/l}). Absence below Lmax is a result, not an
/// error.
std::optional<int64_t> dg_find(const numfield::FieldDescriptor& d, const numfield::OKPair& pair, int64_t Lmax);

struct HeightScanPoint {
    mpq_class X;
    uint64_t samples;
    uint64_t uncertified;
    double fraction;
    util::Interval ci;
};

struct HeightScanReport {
    std::vector<HeightScanPoint> points;
    uint64_t seed;
    int64_t L;
};

/// For each X: samples nonsingular pairs from E_X (deterministic substreams
/// of `seed`) and reports the fraction not certified at L = 1000 with Wilson
/// 95% intervals. Measures the vanishing trend of the non-surjective locus;
/// no asymptotic constant is estimated.
HeightScanReport scan_heights(const numfield::FieldDescriptor& d, const std::vector<mpq_class>& X_list,
                              uint64_t samples, uint64_t seed);

/// Empirical status of the three modularity-criterion hypotheses for one
/// curve: (1) mod-5 image certified to contain SL_2(F_5); (2) good ordinary
/// reduction certified at every prime above 5 via the residue criterion
/// (A != 0 and Delta != 0 mod p); (3) decomposed generic, either by an
/// explicit prime or inferred from (1) over a Galois base field.
struct Checklist {
    enum class Status { Verified, Inferred, Inconclusive };
    Status image;     // (1): Verified or Inconclusive
    Status ordinary;  // (2): Verified or Inconclusive
    Status generic;   // (3): Verified, Inferred or Inconclusive
    std::optional<int64_t> dg_prime;
    ScanReport image_scan;
    bool all_verified; // every hypothesis Verified/Inferred
};

Checklist checklist(const numfield::FieldDescriptor& d, const numfield::OKPair& pair, int64_t L);

/// Naive point count of y^2 = x^3 + a4 x + a6 over F_l via the quadratic
/// character (any odd l coprime to the discriminant).
uint64_t count_points_mod(int64_t a4, int64_t a6, int64_t l);

std::string curve_id(const numfield::FieldDescriptor& d, const numfield::OKPair& pair);

} // namespace modcm::gimage
