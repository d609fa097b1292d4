#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "modcm/numfield.hpp"

namespace modcm::bounds {

/// An exact modularity-proportion lower bound (1 - 1/5^f)^{2r} together with
/// its correctly rounded 12-significant-digit decimal. The bound depends only
/// on f and r; e is carried through for reporting.
struct BoundResult {
    uint32_t e;
    uint32_t f;
    uint32_t r;
    mpq_class exact;

    std::string exact_str() const; // "num/den"
    std::string decimal() const;
    double value() const;
};

/// (1 - 1/5^f)^{2r} as an exact rational.
BoundResult lower_bound(const numfield::SplittingData& s);

/// Worst-case bound (4/5)^{2*degree} over any field of the given even degree
/// (f = 1, r = degree).
BoundResult generic_bound(uint32_t degree);

/// The cyclotomic envelope (1 - 1/(n+1))^{2n/log_5(n+1)} for n >= 2.
/// Double evaluation with relative error well below 1e-12; when n+1 = 5^k and
/// the exponent 2n/k is integral the value is computed exactly and rounded
/// once. The 5-not-dividing-n admissibility constraint applies to field
/// comparisons, not to evaluating this function.
double envelope(int64_t n);

struct ThresholdReport {
    double eps;
    int64_t scan_max;
    int64_t N;             // minimal N with envelope(n) >= 1-eps for all n in [N, scan_max]
    int64_t monotone_from; // smallest M with envelope nondecreasing on [M, scan_max]
    double envelope_at_N;
};

/// Scans [2, scan_max]. Errors if envelope(scan_max) < 1 - eps.
ThresholdReport threshold(double eps, int64_t scan_max);

} // namespace modcm::bounds
