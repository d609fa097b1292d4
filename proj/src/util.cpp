#include "modcm/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <numeric>
#include <thread>

#include "modcm/common.hpp"

namespace modcm::util {

uint64_t SplitMix64::below(uint64_t bound) {
    if (bound == 0) throw bad_input("uniform draw from empty range");
    // reject the biased tail so every residue is equally likely
    uint64_t rej = (UINT64_MAX % bound + 1) % bound; // 2^64 mod bound
    uint64_t lim = UINT64_MAX - rej;
    uint64_t u;
    do {
        u = next();
    } while (u > lim);
    return u % bound;
}

int64_t SplitMix64::in_range(int64_t lo, int64_t hi) {
    if (lo > hi) throw bad_input("uniform draw from empty range");
    uint64_t width = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
    return lo + static_cast<int64_t>(below(width));
}

namespace {
uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
} // namespace

SplitMix64 substream(uint64_t seed, uint64_t stream) {
    // state_0 = mix(mix(seed) xor golden*(stream+1)); documented in README
    return SplitMix64{mix64(mix64(seed) ^ (0x9E3779B97F4A7C15ULL * (stream + 1)))};
}

Interval wilson95(uint64_t successes, uint64_t trials) {
    if (trials == 0) throw bad_input("wilson95: zero trials");
    const double z = 1.959963984540054; // 97.5% normal quantile
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return Interval{std::max(0.0, center - half), std::min(1.0, center + half)};
}

int worker_count() {
    if (const char* env = std::getenv("MODCM_WORKERS")) {
        long w = std::strtol(env, nullptr, 10);
        if (w >= 1 && w <= 256) return static_cast<int>(w);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(std::min(hc, 16u));
}

namespace detail {
std::vector<std::pair<int64_t, int64_t>> chunk_ranges(int64_t n, int chunks) {
    chunks = static_cast<int>(std::min<int64_t>(chunks, n));
    std::vector<std::pair<int64_t, int64_t>> out;
    out.reserve(static_cast<size_t>(chunks));
    for (int c = 0; c < chunks; ++c) out.push_back({n * c / chunks, n * (c + 1) / chunks});
    return out;
}
} // namespace detail

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    // deterministic Miller-Rabin for 64-bit with the standard witness set
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    auto mulmod = [](uint64_t a, uint64_t b, uint64_t m) -> uint64_t {
        return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
    };
    auto powmod = [&](uint64_t a, uint64_t e, uint64_t m) -> uint64_t {
        uint64_t r = 1;
        a %= m;
        while (e) {
            if (e & 1) r = mulmod(r, a, m);
            a = mulmod(a, a, m);
            e >>= 1;
        }
        return r;
    };
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

std::vector<int64_t> primes_up_to(int64_t limit) {
    std::vector<int64_t> out;
    if (limit < 2) return out;
    std::vector<bool> sieve(static_cast<size_t>(limit) + 1, true);
    sieve[0] = sieve[1] = false;
    for (int64_t i = 2; i * i <= limit; ++i) {
        if (!sieve[static_cast<size_t>(i)]) continue;
        for (int64_t j = i * i; j <= limit; j += i) sieve[static_cast<size_t>(j)] = false;
    }
    for (int64_t i = 2; i <= limit; ++i) {
        if (sieve[static_cast<size_t>(i)]) out.push_back(i);
    }
    return out;
}

bool is_squarefree(int64_t n) {
    if (n <= 0) return false;
    for (int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            n /= d;
            if (n % d == 0) return false;
        }
    }
    return true;
}

int64_t euler_phi(int64_t n) {
    if (n <= 0) throw bad_input("euler_phi: positive argument required");
    int64_t result = n;
    for (int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            result -= result / d;
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

uint64_t pow_mod_u64(uint64_t base, uint64_t exp, uint64_t mod) {
    if (mod == 0) throw bad_input("pow_mod_u64: zero modulus");
    uint64_t r = 1 % mod;
    base %= mod;
    while (exp) {
        if (exp & 1) r = static_cast<uint64_t>((static_cast<unsigned __int128>(r) * base) % mod);
        base = static_cast<uint64_t>((static_cast<unsigned __int128>(base) * base) % mod);
        exp >>= 1;
    }
    return r;
}

int64_t multiplicative_order(int64_t a, int64_t n) {
    if (n <= 1) throw bad_input("multiplicative_order: modulus must be > 1");
    a %= n;
    if (a < 0) a += n;
    if (std::gcd(a, n) != 1) throw bad_input("multiplicative_order: arguments not coprime");
    uint64_t v = 1;
    for (int64_t k = 1; k <= n; ++k) {
        v = static_cast<uint64_t>((static_cast<unsigned __int128>(v) * static_cast<uint64_t>(a)) % static_cast<uint64_t>(n));
        if (v == 1) return k;
    }
    throw bad_input("multiplicative_order: no order found"); // unreachable
}

std::vector<int64_t> divisors(int64_t n) {
    std::vector<int64_t> out;
    for (int64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            if (d != n / d) out.push_back(n / d);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

mpq_class parse_decimal(const std::string& text) {
    if (text.empty()) throw bad_input("empty decimal literal");
    size_t pos = 0;
    bool neg = false;
    if (text[pos] == '+' || text[pos] == '-') {
        neg = text[pos] == '-';
        ++pos;
    }
    std::string digits;
    int64_t frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c == '.') {
            if (seen_dot) throw bad_input("malformed decimal literal: " + text);
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else {
            throw bad_input("malformed decimal literal: " + text);
        }
    }
    if (!seen_digit) throw bad_input("malformed decimal literal: " + text);
    mpz_class num(digits.empty() ? "0" : digits, 10);
    if (neg) num = -num;
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(frac_digits));
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

std::string decimal12(const mpq_class& v) {
    if (v <= 0 || v >= 1) throw bad_input("decimal12: value outside (0,1)");
    const int sig = 12;
    mpz_class num = v.get_num();
    mpz_class den = v.get_den();

    // leading zeros after the point: smallest z >= 0 with num*10^(z+1) >= den
    int64_t zeros = 0;
    mpz_class scaled = num * 10;
    while (scaled < den) {
        scaled *= 10;
        ++zeros;
    }

    // round-half-even at 12 significant digits
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(zeros + sig));
    mpz_class shifted = num * pow10;
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), shifted.get_mpz_t(), den.get_mpz_t());
    mpz_class twice = r * 2;
    int cmp = mpz_cmp(twice.get_mpz_t(), den.get_mpz_t());
    if (cmp > 0 || (cmp == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;

    std::string digits = q.get_str();
    if (static_cast<int64_t>(digits.size()) > sig) {
        // rounding carried into an extra digit (e.g. 0.0999...9 -> 0.100...)
        --zeros;
        digits.pop_back(); // the carry result ends in 0
        if (zeros < 0) return "1"; // cannot happen for v < 1 with sig >= 1
    }
    while (static_cast<int64_t>(digits.size()) < sig) digits.insert(digits.begin(), '0');

    std::string out = "0.";
    out.append(static_cast<size_t>(zeros), '0');
    out += digits;
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.push_back('0');
    return out;
}

double to_double_nearest(const mpq_class& v) {
    if (v == 0) return 0.0;
    bool neg = v < 0;
    mpq_class a = neg ? mpq_class(-v) : v;
    mpz_class num = a.get_num();
    mpz_class den = a.get_den();

    // scale so the quotient has exactly 55 bits, round the extra bits away
    long nbits = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2));
    long dbits = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
    long shift = 55 - (nbits - dbits);
    mpz_class n2 = num, d2 = den;
    if (shift > 0)
        mpz_mul_2exp(n2.get_mpz_t(), n2.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    else if (shift < 0)
        mpz_mul_2exp(d2.get_mpz_t(), d2.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n2.get_mpz_t(), d2.get_mpz_t());
    // q has 55 or 56 bits; drop to 53 with round-half-even
    long qbits = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2));
    long drop = qbits - 53;
    long e2 = -shift + drop; // value ~= (q >> drop) * 2^e2
    if (drop > 0) {
        mpz_class low;
        mpz_fdiv_r_2exp(low.get_mpz_t(), q.get_mpz_t(), static_cast<mp_bitcnt_t>(drop));
        mpz_fdiv_q_2exp(q.get_mpz_t(), q.get_mpz_t(), static_cast<mp_bitcnt_t>(drop));
        mpz_class half;
        mpz_ui_pow_ui(half.get_mpz_t(), 2, static_cast<unsigned long>(drop - 1));
        int c = mpz_cmp(low.get_mpz_t(), half.get_mpz_t());
        bool exact_below = (c < 0) || (c == 0 && r == 0);
        if (!exact_below) {
            if (c > 0 || r != 0 || mpz_odd_p(q.get_mpz_t())) q += 1;
        }
    } else if (r != 0) {
        // fewer than 53 bits cannot happen with shift chosen above
    }
    double mant = q.get_d(); // exact: q fits in 54 bits
    double result = std::ldexp(mant, static_cast<int>(e2));
    return neg ? -result : result;
}

mpq_class from_double_exact(double v) {
    mpq_class q;
    mpq_set_d(q.get_mpq_t(), v);
    return q;
}

} // namespace modcm::util
