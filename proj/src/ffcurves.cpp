#include "modcm/ffcurves.hpp"

#include <functional>
#include <vector>

#include "modcm/common.hpp"
#include "modcm/util.hpp"

namespace modcm::ffcurves {

using ffield::FFElem;
using ffield::FieldRef;

ffield::FFElem discriminant(const FFPair& pair) {
    const FieldRef& spec = pair.A.field();
    FFElem a3 = pair.A * pair.A * pair.A;
    FFElem b2 = pair.B * pair.B;
    FFElem four = FFElem::from_int(spec, 4);
    FFElem twenty7 = FFElem::from_int(spec, 27);
    FFElem inner = four * a3 + twenty7 * b2;
    return FFElem::from_int(spec, -16) * inner;
}

namespace {

// product of two coefficient vectors truncated to degree <= p-1
std::vector<FFElem> mul_trunc(const std::vector<FFElem>& a, const std::vector<FFElem>& b, const FieldRef& spec,
                              size_t maxlen) {
    std::vector<FFElem> out(std::min(maxlen, a.size() + b.size() - 1), FFElem::zero(spec));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size() && i + j < out.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
    }
    return out;
}

} // namespace

ffield::FFElem deuring_coefficient(const FFPair& pair) {
    const FieldRef& spec = pair.A.field();
    const uint32_t p = spec->p;
    const size_t maxlen = p; // keep coefficients up to x^{p-1}
    std::vector<FFElem> base{pair.B, pair.A, FFElem::zero(spec), FFElem::one(spec)}; // x^3 + Ax + B
    std::vector<FFElem> result{FFElem::one(spec)};
    uint32_t e = (p - 1) / 2;
    while (e) {
        if (e & 1) result = mul_trunc(result, base, spec, maxlen);
        e >>= 1;
        if (e) base = mul_trunc(base, base, spec, maxlen);
    }
    if (result.size() < maxlen) return FFElem::zero(spec);
    return result[p - 1];
}

CurveClass classify(const FFPair& pair) {
    if (discriminant(pair).is_zero()) return CurveClass::Singular;
    if (deuring_coefficient(pair).is_zero()) return CurveClass::Supersingular;
    return CurveClass::Ordinary;
}

uint64_t count_points(const FFPair& pair) {
    if (discriminant(pair).is_zero()) throw bad_input("count_points: singular pair");
    const FieldRef& spec = pair.A.field();
    const uint64_t q = spec->q;

    // chi table indexed by element index
    std::vector<int8_t> chi(q, -1);
    chi[0] = 0;
    for (uint64_t k = 1; k < q; ++k) {
        FFElem g = FFElem::from_index(spec, k);
        chi[(g * g).index()] = 1;
    }

    int64_t sum = 0;
    for (uint64_t k = 0; k < q; ++k) {
        FFElem x = FFElem::from_index(spec, k);
        FFElem v = (x * x + pair.A) * x + pair.B;
        sum += chi[v.index()];
    }
    return static_cast<uint64_t>(static_cast<int64_t>(q) + 1 + sum);
}

bool is_supersingular_trace(const FFPair& pair) {
    const FieldRef& spec = pair.A.field();
    int64_t t = static_cast<int64_t>(spec->q) + 1 - static_cast<int64_t>(count_points(pair));
    return t % static_cast<int64_t>(spec->p) == 0;
}

CensusResult census(uint32_t f) {
    if (f < 1 || f > kCensusMaxDegree) throw bad_input("census: degree must satisfy 1 <= f <= 5");
    FieldRef spec = ffield::make_field(5, f);
    const uint64_t q = spec->q;

    struct Counts {
        uint64_t sing = 0, ss = 0, ord = 0;
    };
    std::function<Counts(int64_t, int64_t)> chunk = [&](int64_t abegin, int64_t aend) {
        Counts c;
        for (int64_t ai = abegin; ai < aend; ++ai) {
            FFElem A = FFElem::from_index(spec, static_cast<uint64_t>(ai));
            for (uint64_t bi = 0; bi < q; ++bi) {
                FFPair pair{A, FFElem::from_index(spec, bi)};
                switch (classify(pair)) {
                    case CurveClass::Singular: ++c.sing; break;
                    case CurveClass::Supersingular: ++c.ss; break;
                    case CurveClass::Ordinary: ++c.ord; break;
                }
            }
        }
        return c;
    };
    std::function<void(Counts&, const Counts&)> merge = [](Counts& a, const Counts& b) {
        a.sing += b.sing;
        a.ss += b.ss;
        a.ord += b.ord;
    };
    Counts c = util::parallel_chunks<Counts>(static_cast<int64_t>(q), chunk, merge);

    return CensusResult{q, q * q, c.sing, c.ss, c.ord};
}

} // namespace modcm::ffcurves
