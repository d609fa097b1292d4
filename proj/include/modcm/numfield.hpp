#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "modcm/ffield.hpp"
#include "modcm/fppoly.hpp"

namespace modcm::numfield {

/// A supported Galois CM field: imaginary quadratic Q(sqrt(-m)) with m
/// squarefree, or cyclotomic Q(zeta_n) with n >= 3 normalized to n != 2 mod 4
/// and 5 not dividing n (zeta_5 must stay outside K).
///
/// Integral bases: {1, w} with w = sqrt(-m) for m != 3 mod 4 and
/// w = (1+sqrt(-m))/2 for m == 3 mod 4; {1, zeta, ..., zeta^{phi(n)-1}}.
struct FieldDescriptor {
    enum class Kind { Quadratic, Cyclotomic };
    Kind kind;
    int64_t m = 0; // quadratic only
    int64_t n = 0; // cyclotomic only, normalized

    bool half_integer_omega() const; // quadratic with m == 3 mod 4
    int64_t degree() const;          // [K:Q]
    int64_t discriminant() const;    // field discriminant (quadratic); sign included
    std::string text() const;        // "Q(sqrt-m)" or "Q(zeta<n>)"

    bool operator==(const FieldDescriptor& o) const = default;
};

FieldDescriptor make_quadratic(int64_t m);
FieldDescriptor make_cyclotomic(int64_t n_raw); // normalizes n == 2 mod 4 to n/2

/// Parses the CLI syntax "Q(sqrt-<m>)" / "Q(zeta<n>)".
FieldDescriptor parse_descriptor(const std::string& text);

/// Shape of 5 O_K = (p_1 ... p_r)^e with residue degree f: e*f*r = [K:Q].
struct SplittingData {
    uint32_t e;
    uint32_t f;
    uint32_t r;
};

SplittingData splitting_of_5(const FieldDescriptor& d);

/// Monic irreducible factors of Phi_n over F_5, each of degree ord_n(5),
/// sorted by ascending integer encoding of the coefficient vector.
/// Requires 5^f within the field-size cap.
std::vector<fppoly::Poly> cyclotomic_factor_mod5(int64_t n);

/// One residue map O_K -> F_{5^f} per prime above 5: the image of the ring
/// generator (w or zeta) determines the map on coordinates.
struct ReductionMap {
    ffield::FieldRef target;
    ffield::FFElem generator_image;
    uint32_t prime_index;
};

/// Maps ordered deterministically: quadratic split by ascending root,
/// cyclotomic by the factor order of cyclotomic_factor_mod5; within a factor
/// the first root in element-index order is chosen.
std::vector<ReductionMap> reduction_maps(const FieldDescriptor& d);

/// An algebraic integer as an integer coordinate vector in the basis above.
struct OKElement {
    std::vector<int64_t> coords;

    bool operator==(const OKElement& o) const = default;
};

struct OKPair {
    OKElement A;
    OKElement B;
};

OKElement ok_from_int(const FieldDescriptor& d, int64_t v);
OKElement ok_make(const FieldDescriptor& d, std::vector<int64_t> coords);
OKElement ok_add(const FieldDescriptor& d, const OKElement& a, const OKElement& b);
OKElement ok_sub(const FieldDescriptor& d, const OKElement& a, const OKElement& b);
OKElement ok_neg(const FieldDescriptor& d, const OKElement& a);
OKElement ok_mul(const FieldDescriptor& d, const OKElement& a, const OKElement& b);
OKElement ok_scale(const FieldDescriptor& d, int64_t c, const OKElement& a);
bool ok_is_zero(const OKElement& a);

/// -16(4A^3 + 27B^2) in O_K.
OKElement ok_discriminant(const FieldDescriptor& d, const OKPair& pair);

/// Evaluates the coordinate vector at the generator image (a ring
/// homomorphism, since the basis is a power basis of O_K).
ffield::FFElem reduce_element(const OKElement& a, const ReductionMap& map);

/// Minimal polynomial of the ring generator, coefficients mod `modulus`.
std::vector<int64_t> generator_min_poly(const FieldDescriptor& d);

/// True iff the rational prime l (odd, not dividing disc) splits completely.
bool splits_completely(const FieldDescriptor& d, int64_t l);

/// Images of the ring generator under the degree-1 residue maps O_K -> F_l,
/// ascending; one per prime above a completely split l.
std::vector<int64_t> split_images_mod(const FieldDescriptor& d, int64_t l);

} // namespace modcm::numfield
