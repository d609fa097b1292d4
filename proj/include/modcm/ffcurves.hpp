#pragma once

#include <cstdint>

#include "modcm/ffield.hpp"

namespace modcm::ffcurves {

/// A short-Weierstrass coefficient pair y^2 = x^3 + Ax + B over F_q.
struct FFPair {
    ffield::FFElem A;
    ffield::FFElem B;
};

enum class CurveClass { Singular, Supersingular, Ordinary };

/// Delta(A,B) = -16(4A^3 + 27B^2).
ffield::FFElem discriminant(const FFPair& pair);

/// Coefficient of x^{p-1} in (x^3 + Ax + B)^{(p-1)/2}, computed by truncated
/// polynomial exponentiation. Vanishing of this coefficient is the
/// supersingularity test for a nonsingular curve; for p = 5 it equals 2A.
ffield::FFElem deuring_coefficient(const FFPair& pair);

/// Singular iff Delta = 0; else supersingular iff the x^{p-1} coefficient
/// vanishes; else ordinary.
CurveClass classify(const FFPair& pair);

/// Point count N = 1 + sum_x (1 + chi(x^3+Ax+B)) over F_q, chi the quadratic
/// character with chi(0) = 0. Rejects singular pairs.
uint64_t count_points(const FFPair& pair);

/// Standard trace criterion p | q + 1 - N; used only as an independent
/// cross-check of the coefficient test. Rejects singular pairs.
bool is_supersingular_trace(const FFPair& pair);

struct CensusResult {
    uint64_t q;
    uint64_t total;       // q^2
    uint64_t singular;
    uint64_t supersingular;
    uint64_t ordinary;
};

/// Exhaustively classifies all q^2 pairs over F_{5^f}. Pairs are scanned in
/// enumerate x enumerate order; counts are order-independent, so the A-range
/// may be partitioned across workers. f <= 5.
CensusResult census(uint32_t f);

inline constexpr uint32_t kCensusMaxDegree = 5;
inline constexpr uint32_t kCrosscheckMaxDegree = 3; // point-count oracle range

} // namespace modcm::ffcurves
