#include "modcm/fppoly.hpp"

#include <map>

#include "modcm/common.hpp"
#include "modcm/util.hpp"

namespace modcm::fppoly {

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int64_t degree(const Poly& a) {
    for (int64_t i = static_cast<int64_t>(a.size()) - 1; i >= 0; --i) {
        if (a[static_cast<size_t>(i)] != 0) return i;
    }
    return -1;
}

bool is_zero(const Poly& a) { return degree(a) < 0; }

Poly x_power(int64_t k) {
    Poly a(static_cast<size_t>(k) + 1, 0);
    a.back() = 1;
    return a;
}

Poly add(const Poly& a, const Poly& b, uint32_t p) {
    Poly out(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < out.size(); ++i) {
        uint32_t v = (i < a.size() ? a[i] : 0) + (i < b.size() ? b[i] : 0);
        out[i] = v % p;
    }
    trim(out);
    return out;
}

Poly sub(const Poly& a, const Poly& b, uint32_t p) {
    Poly out(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < out.size(); ++i) {
        uint32_t av = i < a.size() ? a[i] : 0;
        uint32_t bv = i < b.size() ? b[i] : 0;
        out[i] = (av + p - bv) % p;
    }
    trim(out);
    return out;
}

Poly mul(const Poly& a, const Poly& b, uint32_t p) {
    if (is_zero(a) || is_zero(b)) return {};
    Poly out(a.size() + b.size() - 1, 0);
    std::vector<uint64_t> acc(out.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) acc[i + j] += static_cast<uint64_t>(a[i]) * b[j];
    }
    for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<uint32_t>(acc[i] % p);
    trim(out);
    return out;
}

namespace {
uint32_t inv_mod_p(uint32_t a, uint32_t p) {
    return static_cast<uint32_t>(util::pow_mod_u64(a, p - 2, p));
}
} // namespace

Poly mod(Poly a, const Poly& m, uint32_t p) {
    int64_t dm = degree(m);
    if (dm < 0) throw bad_input("fppoly::mod by zero polynomial");
    uint32_t lead_inv = inv_mod_p(m[static_cast<size_t>(dm)], p);
    trim(a);
    while (degree(a) >= dm) {
        int64_t da = degree(a);
        uint64_t c = static_cast<uint64_t>(a[static_cast<size_t>(da)]) * lead_inv % p;
        int64_t shift = da - dm;
        for (int64_t i = 0; i <= dm; ++i) {
            uint64_t sub_v = c * m[static_cast<size_t>(i)] % p;
            uint32_t& slot = a[static_cast<size_t>(i + shift)];
            slot = static_cast<uint32_t>((slot + p - sub_v) % p);
        }
        trim(a);
    }
    return a;
}

void divmod(const Poly& a, const Poly& b, uint32_t p, Poly& quot, Poly& rem) {
    int64_t db = degree(b);
    if (db < 0) throw bad_input("fppoly::divmod by zero polynomial");
    rem = a;
    trim(rem);
    int64_t da = degree(rem);
    quot.assign(da >= db ? static_cast<size_t>(da - db) + 1 : 0, 0);
    uint32_t lead_inv = inv_mod_p(b[static_cast<size_t>(db)], p);
    while ((da = degree(rem)) >= db) {
        uint64_t c = static_cast<uint64_t>(rem[static_cast<size_t>(da)]) * lead_inv % p;
        int64_t shift = da - db;
        quot[static_cast<size_t>(shift)] = static_cast<uint32_t>(c);
        for (int64_t i = 0; i <= db; ++i) {
            uint64_t sub_v = c * b[static_cast<size_t>(i)] % p;
            uint32_t& slot = rem[static_cast<size_t>(i + shift)];
            slot = static_cast<uint32_t>((slot + p - sub_v) % p);
        }
        trim(rem);
    }
    trim(quot);
}

Poly gcd(Poly a, Poly b, uint32_t p) {
    trim(a);
    trim(b);
    while (!is_zero(b)) {
        Poly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!is_zero(a)) {
        uint32_t inv = inv_mod_p(a[static_cast<size_t>(degree(a))], p);
        for (auto& c : a) c = static_cast<uint32_t>(static_cast<uint64_t>(c) * inv % p);
    }
    return a;
}

Poly pow_mod(Poly base, uint64_t exp, const Poly& m, uint32_t p) {
    Poly result{1};
    base = mod(std::move(base), m, p);
    while (exp) {
        if (exp & 1) result = mod(mul(result, base, p), m, p);
        base = mod(mul(base, base, p), m, p);
        exp >>= 1;
    }
    return result;
}

Poly derivative(const Poly& a, uint32_t p) {
    if (a.size() <= 1) return {};
    Poly out(a.size() - 1, 0);
    for (size_t i = 1; i < a.size(); ++i)
        out[i - 1] = static_cast<uint32_t>(static_cast<uint64_t>(a[i]) * (i % p) % p);
    trim(out);
    return out;
}

uint32_t eval(const Poly& a, uint32_t x, uint32_t p) {
    uint64_t acc = 0;
    for (int64_t i = static_cast<int64_t>(a.size()) - 1; i >= 0; --i) acc = (acc * x + a[static_cast<size_t>(i)]) % p;
    return static_cast<uint32_t>(acc);
}

bool is_irreducible(const Poly& m, uint32_t p) {
    int64_t f = degree(m);
    if (f < 1) return false;
    Poly x{0, 1};
    Poly t = mod(x, m, p);
    for (int64_t d = 1; d <= f; ++d) {
        t = pow_mod(std::move(t), p, m, p); // t = x^{p^d} mod m
        if (d < f) {
            if (f % d == 0) {
                Poly g = gcd(sub(t, x, p), m, p);
                if (degree(g) != 0) return false;
            }
        } else {
            if (!is_zero(sub(t, x, p))) return false;
        }
    }
    return true;
}

Poly cyclotomic_mod_p(int64_t n, uint32_t p) {
    if (n < 1) throw bad_input("cyclotomic_mod_p: n must be positive");
    std::map<int64_t, Poly> phi;
    for (int64_t d : util::divisors(n)) {
        Poly num = x_power(d);
        num[0] = p - 1; // x^d - 1
        for (auto& [e, ph] : phi) {
            if (d % e == 0) {
                Poly q, r;
                divmod(num, ph, p, q, r);
                if (!is_zero(r)) throw bad_input("cyclotomic_mod_p: internal division failure");
                num = std::move(q);
            }
        }
        phi[d] = std::move(num);
    }
    return phi[n];
}

std::vector<int64_t> cyclotomic_poly_z(int64_t n) {
    if (n < 1) throw bad_input("cyclotomic_poly_z: n must be positive");
    std::map<int64_t, std::vector<int64_t>> phi;
    auto deg_z = [](const std::vector<int64_t>& a) { return static_cast<int64_t>(a.size()) - 1; };
    for (int64_t d : util::divisors(n)) {
        std::vector<int64_t> num(static_cast<size_t>(d) + 1, 0);
        num[0] = -1;
        num.back() = 1;
        for (auto& [e, ph] : phi) {
            if (d % e != 0) continue;
            // exact long division by the monic ph
            std::vector<int64_t> quot(num.size() - ph.size() + 1, 0);
            std::vector<int64_t> rem = num;
            for (int64_t i = deg_z(rem) - deg_z(ph); i >= 0; --i) {
                int64_t c = rem[static_cast<size_t>(i + deg_z(ph))];
                quot[static_cast<size_t>(i)] = c;
                if (c == 0) continue;
                for (size_t j = 0; j < ph.size(); ++j) rem[static_cast<size_t>(i) + j] -= c * ph[j];
            }
            for (int64_t v : rem)
                if (v != 0) throw bad_input("cyclotomic_poly_z: internal division failure");
            num = std::move(quot);
        }
        phi[d] = std::move(num);
    }
    return phi[n];
}

} // namespace modcm::fppoly
