#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "modcm/fppoly.hpp"

namespace modcm::ffield {

/// Enumeration cap on the field size p^f.
inline constexpr uint64_t kMaxFieldSize = 1u << 20;
inline constexpr uint32_t kMaxExtDegree = 8; // 5^8 <= 2^20 < 5^9

/// A finite field F_{p^f}, p an odd prime >= 5, as F_p[x]/(modulus).
///
/// The modulus is the canonical monic irreducible of degree f: the first
/// irreducible in the integer-encoding order c0 + c1*p + ... + c_{f-1}*p^{f-1}
/// of the non-leading coefficients. Construction is deterministic across runs
/// and platforms.
struct FieldSpec {
    uint32_t p;
    uint32_t f;
    uint64_t q; // p^f
    fppoly::Poly modulus; // degree f, monic, coefficients low-to-high

    bool operator==(const FieldSpec& o) const { return p == o.p && f == o.f && modulus == o.modulus; }
};

using FieldRef = std::shared_ptr<const FieldSpec>;

/// Builds (and caches) the canonical F_{p^f}. Rejects p in {2,3} — the
/// discriminant -16(4A^3+27B^2) and the x^{p-1}-coefficient test both assume
/// characteristic >= 5 — and field sizes beyond the enumeration cap.
FieldRef make_field(uint32_t p, uint32_t f);

/// A field element: a residue-class polynomial of degree < f.
class FFElem {
public:
    FFElem() = default;
    explicit FFElem(FieldRef spec) : spec_(std::move(spec)) {}

    static FFElem zero(const FieldRef& spec) { return FFElem(spec); }
    static FFElem one(const FieldRef& spec) { return from_int(spec, 1); }
    /// Element with coefficient vector = base-p digits of `index` (low first).
    static FFElem from_index(const FieldRef& spec, uint64_t index);
    /// Image of a rational integer (reduced mod p).
    static FFElem from_int(const FieldRef& spec, int64_t v);
    static FFElem from_coeffs(const FieldRef& spec, const std::vector<uint32_t>& coeffs);

    const FieldRef& field() const { return spec_; }
    uint32_t coeff(uint32_t i) const { return c_[i]; }
    uint64_t index() const;
    bool is_zero() const;

    friend FFElem operator+(const FFElem& a, const FFElem& b);
    friend FFElem operator-(const FFElem& a, const FFElem& b);
    friend FFElem operator*(const FFElem& a, const FFElem& b);
    FFElem operator-() const;
    bool operator==(const FFElem& o) const;
    bool operator!=(const FFElem& o) const { return !(*this == o); }

private:
    FieldRef spec_;
    std::array<uint16_t, kMaxExtDegree> c_{};

    friend void require_same_field(const FFElem& a, const FFElem& b);
};

/// Multiplicative inverse; rejects zero.
FFElem inv(const FFElem& a);

/// a^e for a nonnegative integer exponent, by square-and-multiply.
FFElem pow(const FFElem& a, uint64_t e);

/// Euler criterion a^{(q-1)/2} = 1; rejects zero (callers treat 0 separately).
bool is_square(const FFElem& a);

/// All q elements in index order: coefficient vectors by ascending integer
/// encoding, so the sequence starts 0, 1, 2, ...
std::vector<FFElem> enumerate(const FieldRef& spec);

} // namespace modcm::ffield
