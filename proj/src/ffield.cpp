#include "modcm/ffield.hpp"

#include <map>
#include <mutex>

#include "modcm/common.hpp"
#include "modcm/util.hpp"

namespace modcm::ffield {

namespace {

uint64_t checked_pow(uint32_t p, uint32_t f) {
    uint64_t q = 1;
    for (uint32_t i = 0; i < f; ++i) {
        q *= p;
        if (q > kMaxFieldSize) throw cap_exceeded("field size p^f exceeds 2^20");
    }
    return q;
}

fppoly::Poly find_canonical_modulus(uint32_t p, uint32_t f, uint64_t q) {
    if (f == 1) return fppoly::Poly{0, 1}; // x
    for (uint64_t k = 0; k < q; ++k) {
        fppoly::Poly cand(f + 1, 0);
        uint64_t v = k;
        for (uint32_t i = 0; i < f; ++i) {
            cand[i] = static_cast<uint32_t>(v % p);
            v /= p;
        }
        cand[f] = 1;
        if (fppoly::is_irreducible(cand, p)) return cand;
    }
    throw bad_input("no irreducible modulus found"); // unreachable: irreducibles exist for every (p,f)
}

} // namespace

FieldRef make_field(uint32_t p, uint32_t f) {
    if (p == 2 || p == 3) throw bad_input("characteristic 2 and 3 are not supported (short Weierstrass machinery assumes p >= 5)");
    if (p < 5 || !util::is_prime_u64(p)) throw bad_input("p must be a prime >= 5");
    if (p >= (1u << 16)) throw bad_input("p must be < 2^16");
    if (f < 1) throw bad_input("extension degree must be >= 1");
    uint64_t q = checked_pow(p, f);

    static std::mutex cache_mutex;
    static std::map<std::pair<uint32_t, uint32_t>, FieldRef> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto key = std::make_pair(p, f);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    auto spec = std::make_shared<FieldSpec>();
    spec->p = p;
    spec->f = f;
    spec->q = q;
    spec->modulus = find_canonical_modulus(p, f, q);
    cache[key] = spec;
    return spec;
}

void require_same_field(const FFElem& a, const FFElem& b) {
    if (!a.spec_ || !b.spec_) throw bad_input("operation on uninitialized field element");
    if (a.spec_ == b.spec_) return;
    if (*a.spec_ == *b.spec_) return;
    throw bad_input("field elements belong to different fields");
}

FFElem FFElem::from_index(const FieldRef& spec, uint64_t index) {
    if (!spec) throw bad_input("null field spec");
    if (index >= spec->q) throw bad_input("element index out of range");
    FFElem e(spec);
    for (uint32_t i = 0; i < spec->f; ++i) {
        e.c_[i] = static_cast<uint16_t>(index % spec->p);
        index /= spec->p;
    }
    return e;
}

FFElem FFElem::from_int(const FieldRef& spec, int64_t v) {
    if (!spec) throw bad_input("null field spec");
    FFElem e(spec);
    int64_t r = v % static_cast<int64_t>(spec->p);
    if (r < 0) r += spec->p;
    e.c_[0] = static_cast<uint16_t>(r);
    return e;
}

FFElem FFElem::from_coeffs(const FieldRef& spec, const std::vector<uint32_t>& coeffs) {
    if (!spec) throw bad_input("null field spec");
    if (coeffs.size() > spec->f) throw bad_input("coefficient vector longer than extension degree");
    FFElem e(spec);
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] >= spec->p) throw bad_input("coefficient not reduced mod p");
        e.c_[i] = static_cast<uint16_t>(coeffs[i]);
    }
    return e;
}

uint64_t FFElem::index() const {
    uint64_t idx = 0;
    for (uint32_t i = spec_->f; i-- > 0;) idx = idx * spec_->p + c_[i];
    return idx;
}

bool FFElem::is_zero() const {
    for (uint32_t i = 0; i < spec_->f; ++i)
        if (c_[i] != 0) return false;
    return true;
}

FFElem operator+(const FFElem& a, const FFElem& b) {
    require_same_field(a, b);
    FFElem out(a.spec_);
    uint32_t p = a.spec_->p;
    for (uint32_t i = 0; i < a.spec_->f; ++i) out.c_[i] = static_cast<uint16_t>((a.c_[i] + b.c_[i]) % p);
    return out;
}

FFElem operator-(const FFElem& a, const FFElem& b) {
    require_same_field(a, b);
    FFElem out(a.spec_);
    uint32_t p = a.spec_->p;
    for (uint32_t i = 0; i < a.spec_->f; ++i) out.c_[i] = static_cast<uint16_t>((a.c_[i] + p - b.c_[i]) % p);
    return out;
}

FFElem FFElem::operator-() const {
    FFElem out(spec_);
    uint32_t p = spec_->p;
    for (uint32_t i = 0; i < spec_->f; ++i) out.c_[i] = static_cast<uint16_t>((p - c_[i]) % p);
    return out;
}

FFElem operator*(const FFElem& a, const FFElem& b) {
    require_same_field(a, b);
    const uint32_t f = a.spec_->f;
    const uint32_t p = a.spec_->p;
    FFElem out(a.spec_);
    if (f == 1) {
        out.c_[0] = static_cast<uint16_t>(static_cast<uint64_t>(a.c_[0]) * b.c_[0] % p);
        return out;
    }
    std::array<uint64_t, 2 * kMaxExtDegree> acc{};
    for (uint32_t i = 0; i < f; ++i) {
        if (a.c_[i] == 0) continue;
        for (uint32_t j = 0; j < f; ++j) acc[i + j] += static_cast<uint64_t>(a.c_[i]) * b.c_[j];
    }
    // reduce by the monic modulus: x^f = -(m_0 + ... + m_{f-1} x^{f-1})
    const auto& m = a.spec_->modulus;
    for (uint32_t i = 2 * f - 2; i >= f; --i) {
        uint64_t c = acc[i] % p;
        if (c) {
            uint64_t cneg = p - c;
            for (uint32_t j = 0; j < f; ++j) acc[i - f + j] += cneg * m[j];
        }
        acc[i] = 0;
        if (i == f) break;
    }
    for (uint32_t i = 0; i < f; ++i) out.c_[i] = static_cast<uint16_t>(acc[i] % p);
    return out;
}

bool FFElem::operator==(const FFElem& o) const {
    require_same_field(*this, o);
    for (uint32_t i = 0; i < spec_->f; ++i)
        if (c_[i] != o.c_[i]) return false;
    return true;
}

FFElem pow(const FFElem& a, uint64_t e) {
    FFElem result = FFElem::one(a.field());
    FFElem base = a;
    while (e) {
        if (e & 1) result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

FFElem inv(const FFElem& a) {
    if (a.is_zero()) throw bad_input("inverse of zero");
    return pow(a, a.field()->q - 2);
}

bool is_square(const FFElem& a) {
    if (a.is_zero()) throw bad_input("is_square(0): zero is handled by the caller");
    return pow(a, (a.field()->q - 1) / 2) == FFElem::one(a.field());
}

std::vector<FFElem> enumerate(const FieldRef& spec) {
    if (!spec) throw bad_input("null field spec");
    std::vector<FFElem> out;
    out.reserve(spec->q);
    for (uint64_t k = 0; k < spec->q; ++k) out.push_back(FFElem::from_index(spec, k));
    return out;
}

} // namespace modcm::ffield
