#include "modcm/numfield.hpp"

#include <algorithm>
#include <numeric>

#include "modcm/common.hpp"
#include "modcm/util.hpp"

namespace modcm::numfield {

using ffield::FFElem;
using ffield::FieldRef;

bool FieldDescriptor::half_integer_omega() const {
    return kind == Kind::Quadratic && m % 4 == 3;
}

int64_t FieldDescriptor::degree() const {
    return kind == Kind::Quadratic ? 2 : util::euler_phi(n);
}

int64_t FieldDescriptor::discriminant() const {
    if (kind != Kind::Quadratic) throw bad_input("discriminant(): quadratic descriptors only");
    return half_integer_omega() ? -m : -4 * m;
}

std::string FieldDescriptor::text() const {
    if (kind == Kind::Quadratic) return "Q(sqrt-" + std::to_string(m) + ")";
    return "Q(zeta" + std::to_string(n) + ")";
}

FieldDescriptor make_quadratic(int64_t m) {
    if (m < 1) throw bad_input("quadratic field parameter m must be positive");
    if (!util::is_squarefree(m)) throw bad_input("quadratic field parameter m must be squarefree");
    FieldDescriptor d;
    d.kind = FieldDescriptor::Kind::Quadratic;
    d.m = m;
    return d;
}

FieldDescriptor make_cyclotomic(int64_t n_raw) {
    if (n_raw < 1) throw bad_input("cyclotomic index must be positive");
    int64_t n = n_raw;
    if (n % 4 == 2) n /= 2; // Q(zeta_{2k}) = Q(zeta_k) for odd k
    if (n < 3) throw bad_input("cyclotomic index too small: the field is Q, not CM");
    if (n % 5 == 0) throw bad_input("zeta_5 lies in Q(zeta_n) when 5 | n; field inadmissible");
    FieldDescriptor d;
    d.kind = FieldDescriptor::Kind::Cyclotomic;
    d.n = n;
    return d;
}

FieldDescriptor parse_descriptor(const std::string& text) {
    auto starts = [&](const char* pre) { return text.rfind(pre, 0) == 0; };
    if (starts("Q(sqrt-") && text.back() == ')') {
        std::string num = text.substr(7, text.size() - 8);
        if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
            throw bad_input("malformed field descriptor: " + text);
        return make_quadratic(std::stoll(num));
    }
    if (starts("Q(zeta") && text.back() == ')') {
        std::string num = text.substr(6, text.size() - 7);
        if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
            throw bad_input("malformed field descriptor: " + text);
        return make_cyclotomic(std::stoll(num));
    }
    throw bad_input("malformed field descriptor: " + text + " (expected Q(sqrt-<m>) or Q(zeta<n>))");
}

SplittingData splitting_of_5(const FieldDescriptor& d) {
    if (d.kind == FieldDescriptor::Kind::Quadratic) {
        if (d.m % 5 == 0) return {2, 1, 1};
        int64_t neg_m = ((-d.m) % 5 + 5) % 5;
        bool square = neg_m == 1 || neg_m == 4;
        return square ? SplittingData{1, 1, 2} : SplittingData{1, 2, 1};
    }
    int64_t f = util::multiplicative_order(5, d.n);
    int64_t phi = util::euler_phi(d.n);
    return {1, static_cast<uint32_t>(f), static_cast<uint32_t>(phi / f)};
}

std::vector<fppoly::Poly> cyclotomic_factor_mod5(int64_t n) {
    if (n < 1) throw bad_input("cyclotomic_factor_mod5: n must be positive");
    if (n % 5 == 0) throw bad_input("cyclotomic_factor_mod5: 5 must not divide n");
    if (n == 1) return {fppoly::Poly{4, 1}};  // x - 1
    if (n == 2) return {fppoly::Poly{1, 1}};  // x + 1

    int64_t f = util::multiplicative_order(5, n);
    int64_t phi = util::euler_phi(n);
    FieldRef field = ffield::make_field(5, static_cast<uint32_t>(f)); // caps 5^f

    // zeta = g^((q-1)/n) for a generator g of the multiplicative group
    const uint64_t q = field->q;
    std::vector<std::pair<uint64_t, uint64_t>> fac; // (prime, .) of q-1
    {
        uint64_t v = q - 1;
        for (uint64_t p = 2; p * p <= v; ++p) {
            if (v % p == 0) {
                fac.push_back({p, 0});
                while (v % p == 0) v /= p;
            }
        }
        if (v > 1) fac.push_back({v, 0});
    }
    FFElem gen = FFElem::zero(field);
    bool found = false;
    for (uint64_t k = 2; k < q && !found; ++k) {
        FFElem g = FFElem::from_index(field, k);
        found = true;
        for (auto& [pr, unused] : fac) {
            if (pow(g, (q - 1) / pr) == FFElem::one(field)) {
                found = false;
                break;
            }
        }
        if (found) gen = g;
    }
    if (!found) throw bad_input("cyclotomic_factor_mod5: no multiplicative generator found"); // unreachable
    if ((q - 1) % static_cast<uint64_t>(n) != 0)
        throw bad_input("cyclotomic_factor_mod5: n does not divide q-1"); // unreachable: f = ord_n(5)
    FFElem zeta = pow(gen, (q - 1) / static_cast<uint64_t>(n));

    // Frobenius orbits of the primitive n-th roots zeta^k, gcd(k,n)=1
    std::vector<FFElem> zpow(static_cast<size_t>(n), FFElem::one(field));
    for (int64_t i = 1; i < n; ++i) zpow[static_cast<size_t>(i)] = zpow[static_cast<size_t>(i - 1)] * zeta;
    std::vector<bool> used(static_cast<size_t>(n), false);
    std::vector<fppoly::Poly> factors;
    for (int64_t k = 1; k < n; ++k) {
        if (std::gcd(k, n) != 1 || used[static_cast<size_t>(k)]) continue;
        std::vector<int64_t> orbit;
        int64_t j = k;
        do {
            orbit.push_back(j);
            used[static_cast<size_t>(j)] = true;
            j = j * 5 % n;
        } while (j != k);
        // product over the orbit of (x - zeta^j)
        std::vector<FFElem> poly{FFElem::one(field)};
        for (int64_t e : orbit) {
            std::vector<FFElem> next(poly.size() + 1, FFElem::zero(field));
            for (size_t i = 0; i < poly.size(); ++i) {
                next[i + 1] = next[i + 1] + poly[i];
                next[i] = next[i] - poly[i] * zpow[static_cast<size_t>(e)];
            }
            poly = std::move(next);
        }
        fppoly::Poly coeffs(poly.size());
        for (size_t i = 0; i < poly.size(); ++i) {
            for (uint32_t ci = 1; ci < field->f; ++ci) {
                if (poly[i].coeff(ci) != 0)
                    throw bad_input("cyclotomic_factor_mod5: orbit product left the prime field"); // unreachable
            }
            coeffs[i] = poly[i].coeff(0);
        }
        if (fppoly::degree(coeffs) != f)
            throw bad_input("cyclotomic_factor_mod5: factor degree mismatch"); // unreachable
        factors.push_back(std::move(coeffs));
    }
    if (static_cast<int64_t>(factors.size()) != phi / f)
        throw bad_input("cyclotomic_factor_mod5: factor count mismatch"); // unreachable

    std::sort(factors.begin(), factors.end(), [](const fppoly::Poly& a, const fppoly::Poly& b) {
        uint64_t ea = 0, eb = 0;
        for (size_t i = a.size(); i-- > 0;) ea = ea * 5 + a[i];
        for (size_t i = b.size(); i-- > 0;) eb = eb * 5 + b[i];
        return ea < eb;
    });

    // sanity: the factors multiply back to Phi_n mod 5
    fppoly::Poly prod{1};
    for (const auto& g : factors) prod = fppoly::mul(prod, g, 5);
    if (prod != fppoly::cyclotomic_mod_p(n, 5))
        throw bad_input("cyclotomic_factor_mod5: product check failed"); // unreachable
    return factors;
}

std::vector<int64_t> generator_min_poly(const FieldDescriptor& d) {
    if (d.kind == FieldDescriptor::Kind::Quadratic) {
        if (d.half_integer_omega()) return {(1 + d.m) / 4, -1, 1}; // x^2 - x + (1+m)/4
        return {d.m, 0, 1};                                        // x^2 + m
    }
    return fppoly::cyclotomic_poly_z(d.n);
}

namespace {

FFElem first_root_in_field(const fppoly::Poly& poly, const FieldRef& field) {
    for (uint64_t k = 0; k < field->q; ++k) {
        FFElem x = FFElem::from_index(field, k);
        FFElem acc = FFElem::zero(field);
        for (size_t i = poly.size(); i-- > 0;) acc = acc * x + FFElem::from_int(field, poly[i]);
        if (acc.is_zero()) return x;
    }
    throw bad_input("no root found in target field"); // unreachable for our callers
}

} // namespace

std::vector<ReductionMap> reduction_maps(const FieldDescriptor& d) {
    std::vector<ReductionMap> maps;
    if (d.kind == FieldDescriptor::Kind::Quadratic) {
        auto mp = generator_min_poly(d);
        fppoly::Poly mod5(mp.size());
        for (size_t i = 0; i < mp.size(); ++i) mod5[i] = static_cast<uint32_t>(((mp[i] % 5) + 5) % 5);
        std::vector<uint32_t> roots;
        for (uint32_t c = 0; c < 5; ++c)
            if (fppoly::eval(mod5, c, 5) == 0) roots.push_back(c);

        if (roots.size() == 2) { // split
            FieldRef f5 = ffield::make_field(5, 1);
            maps.push_back({f5, FFElem::from_int(f5, roots[0]), 0});
            maps.push_back({f5, FFElem::from_int(f5, roots[1]), 1});
        } else if (roots.size() == 1) { // ramified: the double root
            FieldRef f5 = ffield::make_field(5, 1);
            maps.push_back({f5, FFElem::from_int(f5, roots[0]), 0});
        } else { // inert
            FieldRef f25 = ffield::make_field(5, 2);
            maps.push_back({f25, first_root_in_field(mod5, f25), 0});
        }
        return maps;
    }

    auto factors = cyclotomic_factor_mod5(d.n);
    uint32_t f = static_cast<uint32_t>(fppoly::degree(factors[0]));
    FieldRef field = ffield::make_field(5, f);
    for (uint32_t i = 0; i < factors.size(); ++i)
        maps.push_back({field, first_root_in_field(factors[i], field), i});
    return maps;
}

// ---------------------------------------------------------------------------
// O_K arithmetic
// ---------------------------------------------------------------------------

namespace {

int64_t checked_add(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw cap_exceeded("O_K coordinate overflow");
    return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw cap_exceeded("O_K coordinate overflow");
    return r;
}

size_t expected_dim(const FieldDescriptor& d) { return static_cast<size_t>(d.degree()); }

void check_dim(const FieldDescriptor& d, const OKElement& a) {
    if (a.coords.size() != expected_dim(d)) throw bad_input("O_K element has wrong coordinate dimension");
}

} // namespace

OKElement ok_from_int(const FieldDescriptor& d, int64_t v) {
    OKElement e;
    e.coords.assign(expected_dim(d), 0);
    e.coords[0] = v;
    return e;
}

OKElement ok_make(const FieldDescriptor& d, std::vector<int64_t> coords) {
    OKElement e{std::move(coords)};
    check_dim(d, e);
    return e;
}

OKElement ok_add(const FieldDescriptor& d, const OKElement& a, const OKElement& b) {
    check_dim(d, a);
    check_dim(d, b);
    OKElement out = a;
    for (size_t i = 0; i < out.coords.size(); ++i) out.coords[i] = checked_add(out.coords[i], b.coords[i]);
    return out;
}

OKElement ok_sub(const FieldDescriptor& d, const OKElement& a, const OKElement& b) {
    return ok_add(d, a, ok_neg(d, b));
}

OKElement ok_neg(const FieldDescriptor& d, const OKElement& a) {
    check_dim(d, a);
    OKElement out = a;
    for (auto& c : out.coords) c = -c;
    return out;
}

OKElement ok_scale(const FieldDescriptor& d, int64_t c, const OKElement& a) {
    check_dim(d, a);
    OKElement out = a;
    for (auto& v : out.coords) v = checked_mul(v, c);
    return out;
}

bool ok_is_zero(const OKElement& a) {
    return std::all_of(a.coords.begin(), a.coords.end(), [](int64_t c) { return c == 0; });
}

OKElement ok_mul(const FieldDescriptor& d, const OKElement& a, const OKElement& b) {
    check_dim(d, a);
    check_dim(d, b);
    if (d.kind == FieldDescriptor::Kind::Quadratic) {
        // (a0 + a1 w)(b0 + b1 w) with w^2 = -m resp. w^2 = w - (1+m)/4
        int64_t a0 = a.coords[0], a1 = a.coords[1], b0 = b.coords[0], b1 = b.coords[1];
        int64_t cross = checked_add(checked_mul(a0, b1), checked_mul(a1, b0));
        int64_t w2 = checked_mul(a1, b1);
        int64_t c0, c1;
        if (d.half_integer_omega()) {
            int64_t k = (1 + d.m) / 4;
            c0 = checked_add(checked_mul(a0, b0), -checked_mul(w2, k));
            c1 = checked_add(cross, w2);
        } else {
            c0 = checked_add(checked_mul(a0, b0), -checked_mul(w2, d.m));
            c1 = cross;
        }
        return OKElement{{c0, c1}};
    }

    // cyclotomic: convolution then reduction mod Phi_n (monic)
    auto phi = fppoly::cyclotomic_poly_z(d.n);
    size_t dim = expected_dim(d);
    std::vector<int64_t> acc(2 * dim - 1, 0);
    for (size_t i = 0; i < dim; ++i) {
        if (a.coords[i] == 0) continue;
        for (size_t j = 0; j < dim; ++j)
            acc[i + j] = checked_add(acc[i + j], checked_mul(a.coords[i], b.coords[j]));
    }
    for (size_t i = acc.size(); i-- > dim;) {
        int64_t c = acc[i];
        if (c == 0) continue;
        acc[i] = 0;
        for (size_t j = 0; j < phi.size() - 1; ++j) {
            acc[i - (phi.size() - 1) + j] = checked_add(acc[i - (phi.size() - 1) + j], -checked_mul(c, phi[j]));
        }
    }
    acc.resize(dim);
    return OKElement{std::move(acc)};
}

OKElement ok_discriminant(const FieldDescriptor& d, const OKPair& pair) {
    OKElement a3 = ok_mul(d, ok_mul(d, pair.A, pair.A), pair.A);
    OKElement b2 = ok_mul(d, pair.B, pair.B);
    OKElement inner = ok_add(d, ok_scale(d, 4, a3), ok_scale(d, 27, b2));
    return ok_scale(d, -16, inner);
}

FFElem reduce_element(const OKElement& a, const ReductionMap& map) {
    FFElem acc = FFElem::zero(map.target);
    for (size_t i = a.coords.size(); i-- > 0;)
        acc = acc * map.generator_image + FFElem::from_int(map.target, a.coords[i]);
    return acc;
}

// ---------------------------------------------------------------------------
// Degree-1 primes above a split rational prime l
// ---------------------------------------------------------------------------

bool splits_completely(const FieldDescriptor& d, int64_t l) {
    if (l < 3 || !util::is_prime_u64(static_cast<uint64_t>(l))) throw bad_input("splits_completely: l must be an odd prime");
    if (d.kind == FieldDescriptor::Kind::Quadratic) {
        int64_t disc = d.discriminant();
        if (disc % l == 0) return false;
        int64_t red = ((disc % l) + l) % l;
        return util::pow_mod_u64(static_cast<uint64_t>(red), static_cast<uint64_t>((l - 1) / 2),
                                 static_cast<uint64_t>(l)) == 1;
    }
    if (d.n % l == 0) return false;
    return l % d.n == 1;
}

std::vector<int64_t> split_images_mod(const FieldDescriptor& d, int64_t l) {
    if (!splits_completely(d, l)) throw bad_input("split_images_mod: l does not split completely");
    std::vector<int64_t> images;
    if (d.kind == FieldDescriptor::Kind::Quadratic) {
        auto mp = generator_min_poly(d);
        for (int64_t c = 0; c < l; ++c) {
            // evaluate x^2 + mp1*x + mp0 mod l
            int64_t v = ((c * c + mp[1] * c + mp[0]) % l + l) % l;
            if (v == 0) images.push_back(c);
        }
        if (images.size() != 2) throw bad_input("split_images_mod: expected two roots"); // unreachable after split check
        return images;
    }

    // cyclotomic, l == 1 mod n: the primitive n-th roots of unity mod l
    uint64_t ul = static_cast<uint64_t>(l);
    std::vector<uint64_t> fac;
    {
        uint64_t v = ul - 1;
        for (uint64_t p = 2; p * p <= v; ++p) {
            if (v % p == 0) {
                fac.push_back(p);
                while (v % p == 0) v /= p;
            }
        }
        if (v > 1) fac.push_back(v);
    }
    uint64_t g = 0;
    for (uint64_t cand = 2; cand < ul; ++cand) {
        bool ok = true;
        for (uint64_t p : fac) {
            if (util::pow_mod_u64(cand, (ul - 1) / p, ul) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) {
            g = cand;
            break;
        }
    }
    uint64_t z = util::pow_mod_u64(g, (ul - 1) / static_cast<uint64_t>(d.n), ul);
    uint64_t zk = 1;
    for (int64_t k = 1; k < d.n; ++k) {
        zk = static_cast<uint64_t>((static_cast<unsigned __int128>(zk) * z) % ul);
        if (std::gcd(k, d.n) == 1) images.push_back(static_cast<int64_t>(zk));
    }
    std::sort(images.begin(), images.end());
    return images;
}

} // namespace modcm::numfield
