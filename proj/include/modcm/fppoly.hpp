#pragma once

#include <cstdint>
#include <vector>

namespace modcm::fppoly {

// Dense polynomials over Z/p for small p (< 2^16), coefficients low-to-high.
// Zero is the empty vector (or all-zero); deg(zero) = -1.

using Poly = std::vector<uint32_t>;

void trim(Poly& a);
int64_t degree(const Poly& a);
bool is_zero(const Poly& a);
Poly x_power(int64_t k); // x^k

Poly add(const Poly& a, const Poly& b, uint32_t p);
Poly sub(const Poly& a, const Poly& b, uint32_t p);
Poly mul(const Poly& a, const Poly& b, uint32_t p);

/// Remainder of a modulo monic m.
Poly mod(Poly a, const Poly& m, uint32_t p);

/// Quotient/remainder; divisor need not be monic (leading coeff inverted mod p).
void divmod(const Poly& a, const Poly& b, uint32_t p, Poly& quot, Poly& rem);

/// Monic gcd.
Poly gcd(Poly a, Poly b, uint32_t p);

Poly pow_mod(Poly base, uint64_t exp, const Poly& m, uint32_t p);
Poly derivative(const Poly& a, uint32_t p);
uint32_t eval(const Poly& a, uint32_t x, uint32_t p);

/// Irreducibility of a monic polynomial: gcd(x^{p^d} - x, m) is constant for
/// every proper divisor d of deg(m), and x^{p^deg} = x (mod m).
bool is_irreducible(const Poly& m, uint32_t p);

/// Cyclotomic polynomial Phi_n reduced mod p.
Poly cyclotomic_mod_p(int64_t n, uint32_t p);

/// Cyclotomic polynomial Phi_n over the integers (int64 coefficients).
std::vector<int64_t> cyclotomic_poly_z(int64_t n);

} // namespace modcm::fppoly
