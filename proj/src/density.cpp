#include "modcm/density.hpp"

#include <cmath>

#include "modcm/common.hpp"
#include "modcm/ffield.hpp"

namespace modcm::density {

using ffield::FFElem;
using numfield::FieldDescriptor;
using numfield::OKElement;
using numfield::OKPair;
using numfield::ReductionMap;

DiskSpec make_disk(const FieldDescriptor& d, const mpq_class& Y) {
    if (d.kind != FieldDescriptor::Kind::Quadratic)
        throw bad_input("disks are supported over imaginary quadratic fields only");
    if (Y < 1) throw bad_input("disk radius must satisfy Y >= 1");
    return DiskSpec{d, Y};
}

double embedding_abs(const OKElement& a, const FieldDescriptor& d) {
    if (d.kind != FieldDescriptor::Kind::Quadratic)
        throw bad_input("embedding_abs: quadratic descriptors only");
    double x = static_cast<double>(a.coords[0]);
    double y = static_cast<double>(a.coords[1]);
    double md = static_cast<double>(d.m);
    if (d.half_integer_omega()) {
        double re = x + y / 2.0;
        double im2 = md * y * y / 4.0;
        return std::sqrt(re * re + im2);
    }
    return std::sqrt(x * x + md * y * y);
}

namespace {

int64_t floordiv(int64_t a, int64_t b) {
    int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

/// #{ x in [lo, hi] : x == t (mod 5) }
int64_t count_progression(int64_t lo, int64_t hi, int64_t t) {
    if (lo > hi) return 0;
    return floordiv(hi - t, 5) - floordiv(lo - 1 - t, 5);
}

int64_t mod5(int64_t v) { return ((v % 5) + 5) % 5; }

/// floor(sqrt(a)) for a >= 0.
int64_t isqrt_mpz(const mpz_class& a) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), a.get_mpz_t());
    return static_cast<int64_t>(r.get_si());
}

} // namespace

Disk::Disk(DiskSpec spec) : spec_(std::move(spec)) {
    spec_ = make_disk(spec_.d, spec_.Y); // re-validate
    m_ = spec_.d.m;
    half_ = spec_.d.half_integer_omega();
    mpz_class yn = spec_.Y.get_num();
    mpz_class yd = spec_.Y.get_den();
    yn2_ = yn * yn;
    if (half_) yn2_ *= 4;
    yd2_ = yd * yd;

    // covering box: |y| <= ymax, |x| <= xmax
    mpz_class t = (yn2_ - 1) / (yd2_ * m_);
    box_y_ = isqrt_mpz(t);
    mpz_class u = (yn2_ - 1) / yd2_;
    int64_t umax = isqrt_mpz(u);
    box_x_ = half_ ? (umax + box_y_) / 2 + 1 : umax;
}

void Disk::check_column_cap() const {
    if (box_y_ > kColumnCap) throw cap_exceeded("disk radius too large for a column scan");
}

void Disk::require_enumerable() const {
    double yq = spec_.Y.get_d();
    double est = M_PI * yq * yq / std::sqrt(static_cast<double>(m_)) * (half_ ? 2.0 : 1.0);
    if (est > 1.05 * static_cast<double>(kPointCap) || count() > kPointCap)
        throw cap_exceeded("disk point count exceeds the 1e9 enumeration cap");
}

bool Disk::contains(int64_t x, int64_t y) const {
    // (x^2 + m y^2) Yd^2 < Yn^2, resp. ((2x+y)^2 + m y^2) Yd^2 < 4 Yn^2
    mpz_class lhs;
    if (half_) {
        mpz_class u(2 * x + y);
        lhs = u * u;
    } else {
        mpz_class xx(x);
        lhs = xx * xx;
    }
    mpz_class yy(y);
    lhs += yy * yy * m_;
    lhs *= yd2_;
    return lhs < yn2_;
}

namespace {

struct Column {
    int64_t xlo, xhi; // empty iff xlo > xhi
};

} // namespace

// per-column x-interval; shared by count/class_counts/for_each
static Column column_range(int64_t y, int64_t m, bool half, const mpz_class& yn2, const mpz_class& yd2) {
    mpz_class D = yn2 - yd2 * m * y * y;
    if (D <= 0) return {1, 0};
    mpz_class t = (D - 1) / yd2;
    int64_t umax = isqrt_mpz(t);
    if (!half) return {-umax, umax};
    // u = 2x + y must share the parity of y
    int64_t parity = ((y % 2) + 2) % 2;
    int64_t uhi = (((umax % 2) + 2) % 2 == parity) ? umax : umax - 1;
    if (uhi < 0) return {1, 0};
    return {(-uhi - y) / 2, (uhi - y) / 2};
}

uint64_t Disk::count() const {
    check_column_cap();
    auto chunk = [&](int64_t b, int64_t e) {
        uint64_t c = 0;
        for (int64_t i = b; i < e; ++i) {
            int64_t y = i - box_y_;
            Column col = column_range(y, m_, half_, yn2_, yd2_);
            if (col.xlo <= col.xhi) c += static_cast<uint64_t>(col.xhi - col.xlo + 1);
        }
        return c;
    };
    auto merge = [](uint64_t& a, const uint64_t& b) { a += b; };
    return util::parallel_chunks<uint64_t>(2 * box_y_ + 1, chunk, merge);
}

std::array<uint64_t, 25> Disk::class_counts() const {
    check_column_cap();
    using Acc = std::vector<uint64_t>;
    auto chunk = [&](int64_t b, int64_t e) {
        Acc acc(25, 0);
        for (int64_t i = b; i < e; ++i) {
            int64_t y = i - box_y_;
            Column col = column_range(y, m_, half_, yn2_, yd2_);
            if (col.xlo > col.xhi) continue;
            int64_t y5 = mod5(y);
            for (int64_t t = 0; t < 5; ++t)
                acc[static_cast<size_t>(t + 5 * y5)] += static_cast<uint64_t>(count_progression(col.xlo, col.xhi, t));
        }
        return acc;
    };
    auto merge = [](Acc& a, const Acc& b) {
        for (size_t i = 0; i < 25; ++i) a[i] += b[i];
    };
    Acc acc = util::parallel_chunks<Acc>(2 * box_y_ + 1, chunk, merge);
    std::array<uint64_t, 25> out{};
    for (size_t i = 0; i < 25; ++i) out[i] = acc[i];
    return out;
}

void Disk::for_each(const std::function<void(int64_t, int64_t)>& fn) const {
    require_enumerable();
    for (int64_t y = -box_y_; y <= box_y_; ++y) {
        Column col = column_range(y, m_, half_, yn2_, yd2_);
        for (int64_t x = col.xlo; x <= col.xhi; ++x) fn(x, y);
    }
}

OKElement Disk::sample(util::SplitMix64& rng) const {
    for (int tries = 0; tries < 1 << 20; ++tries) {
        int64_t x = rng.in_range(-box_x_, box_x_);
        int64_t y = rng.in_range(-box_y_, box_y_);
        if (contains(x, y)) return OKElement{{x, y}};
    }
    throw bad_input("disk rejection sampling failed"); // Y >= 1 makes this unreachable
}

std::vector<OKElement> enumerate_disk(const DiskSpec& spec) {
    Disk disk(spec);
    std::vector<OKElement> out;
    out.reserve(disk.count());
    disk.for_each([&](int64_t x, int64_t y) { out.push_back(OKElement{{x, y}}); });
    return out;
}

// ---------------------------------------------------------------------------
// Residue distributions and density
// ---------------------------------------------------------------------------

namespace {

/// element of F_{5^f} represented by a residue class (x5, y5) under one map
FFElem class_image(int64_t x5, int64_t y5, const ReductionMap& map) {
    return FFElem::from_int(map.target, x5) + FFElem::from_int(map.target, y5) * map.generator_image;
}

} // namespace

uint64_t ResidueDistribution::max_count() const {
    uint64_t m = 0;
    for (uint64_t c : counts) m = std::max(m, c);
    return m;
}

uint64_t ResidueDistribution::min_count() const {
    uint64_t m = UINT64_MAX;
    for (uint64_t c : counts) m = std::min(m, c);
    return m;
}

ResidueDistribution residue_distribution(const DiskSpec& spec, const std::vector<ReductionMap>& maps) {
    if (maps.empty()) throw bad_input("residue_distribution: no reduction maps");
    Disk disk(spec);
    auto cls = disk.class_counts();

    uint64_t q = maps[0].target->q;
    uint64_t tuple_count = 1;
    for (size_t i = 0; i < maps.size(); ++i) tuple_count *= q;

    ResidueDistribution dist;
    dist.counts.assign(tuple_count, 0);
    dist.total = 0;
    for (int64_t y5 = 0; y5 < 5; ++y5) {
        for (int64_t x5 = 0; x5 < 5; ++x5) {
            uint64_t tuple = 0;
            for (size_t i = maps.size(); i-- > 0;) tuple = tuple * q + class_image(x5, y5, maps[i]).index();
            uint64_t c = cls[static_cast<size_t>(x5 + 5 * y5)];
            dist.counts[tuple] += c;
            dist.total += c;
        }
    }
    return dist;
}

PairSampler::PairSampler(const FieldDescriptor& d, const mpq_class& X)
    : a_(make_disk(d, mpq_class(X * X * X * X))), b_(make_disk(d, mpq_class(X * X * X * X * X * X))) {}

OKPair PairSampler::draw(util::SplitMix64& rng) const {
    OKElement A = a_.sample(rng);
    OKElement B = b_.sample(rng);
    return OKPair{A, B};
}

namespace {

struct PassTables {
    std::vector<ReductionMap> maps;
    // per map: 25-entry table of residue-class images and nonzero flags
    std::vector<std::array<bool, 25>> a_nonzero;
    // pass_pair[i][a*25+b]: A_i != 0 and 4 A_i^3 + 27 B_i^2 != 0
    std::vector<std::array<bool, 625>> pass;
};

PassTables build_pass_tables(const FieldDescriptor& d) {
    PassTables t;
    t.maps = numfield::reduction_maps(d);
    t.a_nonzero.resize(t.maps.size());
    t.pass.resize(t.maps.size());
    for (size_t i = 0; i < t.maps.size(); ++i) {
        const auto& map = t.maps[i];
        std::array<FFElem, 25> img;
        for (int64_t y5 = 0; y5 < 5; ++y5)
            for (int64_t x5 = 0; x5 < 5; ++x5) img[static_cast<size_t>(x5 + 5 * y5)] = class_image(x5, y5, map);
        FFElem four = FFElem::from_int(map.target, 4);
        FFElem twenty7 = FFElem::from_int(map.target, 27);
        for (size_t a = 0; a < 25; ++a) {
            t.a_nonzero[i][a] = !img[a].is_zero();
            FFElem a3 = img[a] * img[a] * img[a];
            for (size_t b = 0; b < 25; ++b) {
                FFElem delta = four * a3 + twenty7 * (img[b] * img[b]);
                t.pass[i][a * 25 + b] = t.a_nonzero[i][a] && !delta.is_zero();
            }
        }
    }
    return t;
}

} // namespace

DensityReport ordinary_density_exact(const FieldDescriptor& d, const mpq_class& X) {
    if (d.kind != FieldDescriptor::Kind::Quadratic)
        throw bad_input("ordinary_density_exact: quadratic descriptors only");
    if (X < 1) throw bad_input("ordinary_density_exact: X must be >= 1");

    PassTables tables = build_pass_tables(d);
    mpq_class ya(X * X * X * X);
    mpq_class yb(ya * X * X);
    Disk diskA(make_disk(d, ya));
    Disk diskB(make_disk(d, yb));
    diskA.require_enumerable();
    diskB.require_enumerable();
    auto cntA = diskA.class_counts();
    auto cntB = diskB.class_counts();

    uint64_t countA = 0, countB = 0;
    for (uint64_t c : cntA) countA += c;
    for (uint64_t c : cntB) countB += c;

    const size_t r = tables.maps.size();
    unsigned __int128 joint = 0;
    std::vector<unsigned __int128> per_prime_num(r, 0);
    for (size_t a = 0; a < 25; ++a) {
        if (cntA[a] == 0) continue;
        for (size_t b = 0; b < 25; ++b) {
            if (cntB[b] == 0) continue;
            unsigned __int128 w = static_cast<unsigned __int128>(cntA[a]) * cntB[b];
            bool all = true;
            for (size_t i = 0; i < r; ++i) {
                if (tables.pass[i][a * 25 + b]) {
                    per_prime_num[i] += w;
                } else {
                    all = false;
                }
            }
            if (all) joint += w;
        }
    }

    auto q_from_128 = [](unsigned __int128 num, uint64_t cA, uint64_t cB) {
        mpz_class n(static_cast<unsigned long>(num >> 64));
        mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), 64);
        n += mpz_class(static_cast<unsigned long>(num));
        mpq_class q(n, mpz_class(static_cast<unsigned long>(cA)) * static_cast<unsigned long>(cB));
        q.canonicalize();
        return q;
    };

    DensityReport rep;
    rep.field = d;
    rep.X = X;
    rep.mode = "exact";
    rep.countA = countA;
    rep.countB = countB;
    rep.pair_total = mpz_class(static_cast<unsigned long>(countA)) * static_cast<unsigned long>(countB);
    rep.empirical_exact = q_from_128(joint, countA, countB);
    rep.empirical_density = util::to_double_nearest(rep.empirical_exact);
    rep.theoretical = bounds::lower_bound(numfield::splitting_of_5(d));
    for (size_t i = 0; i < r; ++i) {
        rep.per_prime_exact.push_back(q_from_128(per_prime_num[i], countA, countB));
        rep.per_prime.push_back(util::to_double_nearest(rep.per_prime_exact.back()));
    }

    EXCount ex = count_EX(d, X);
    rep.delta_zero_pairs = ex.delta_zero_pairs;
    rep.ex_size = ex.ex_size;
    return rep;
}

DensityReport montecarlo_density(const FieldDescriptor& d, const mpq_class& X, uint64_t samples, uint64_t seed) {
    if (d.kind != FieldDescriptor::Kind::Quadratic)
        throw bad_input("montecarlo_density: quadratic descriptors only");
    if (X < 1) throw bad_input("montecarlo_density: X must be >= 1");
    if (samples < 1000) throw bad_input("montecarlo_density: at least 1000 samples required");

    PassTables tables = build_pass_tables(d);
    PairSampler sampler(d, X);
    const size_t r = tables.maps.size();

    struct Acc {
        uint64_t passes = 0;
        std::vector<uint64_t> per_prime;
    };
    auto chunk = [&](int64_t b, int64_t e) {
        Acc acc;
        acc.per_prime.assign(r, 0);
        for (int64_t i = b; i < e; ++i) {
            util::SplitMix64 rng = util::substream(seed, static_cast<uint64_t>(i));
            OKPair pair = sampler.draw(rng);
            size_t ca = static_cast<size_t>(mod5(pair.A.coords[0]) + 5 * mod5(pair.A.coords[1]));
            size_t cb = static_cast<size_t>(mod5(pair.B.coords[0]) + 5 * mod5(pair.B.coords[1]));
            bool all = true;
            for (size_t k = 0; k < r; ++k) {
                if (tables.pass[k][ca * 25 + cb]) {
                    ++acc.per_prime[k];
                } else {
                    all = false;
                }
            }
            if (all) ++acc.passes;
        }
        return acc;
    };
    auto merge = [&](Acc& a, const Acc& b) {
        a.passes += b.passes;
        for (size_t i = 0; i < r; ++i) a.per_prime[i] += b.per_prime[i];
    };
    Acc acc = util::parallel_chunks<Acc>(static_cast<int64_t>(samples), chunk, merge);

    DensityReport rep;
    rep.field = d;
    rep.X = X;
    rep.mode = "mc";
    rep.countA = sampler.disk_a().count();
    rep.countB = sampler.disk_b().count();
    rep.pair_total = mpz_class(static_cast<unsigned long>(rep.countA)) * static_cast<unsigned long>(rep.countB);
    rep.empirical_density = static_cast<double>(acc.passes) / static_cast<double>(samples);
    rep.theoretical = bounds::lower_bound(numfield::splitting_of_5(d));
    for (size_t i = 0; i < r; ++i)
        rep.per_prime.push_back(static_cast<double>(acc.per_prime[i]) / static_cast<double>(samples));
    rep.mc = MonteCarloStats{samples, acc.passes, seed, util::wilson95(acc.passes, samples)};
    return rep;
}

// ---------------------------------------------------------------------------
// |E'_X| and |E_X|
// ---------------------------------------------------------------------------

namespace {

/// sqrt of a nonnegative rational if it exists
std::optional<mpq_class> rational_sqrt(const mpq_class& v) {
    if (v < 0) return std::nullopt;
    if (v == 0) return mpq_class(0);
    const mpz_class& num = v.get_num();
    const mpz_class& den = v.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t())) return std::nullopt;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    return mpq_class(sn, sd);
}

/// integral coordinates of u + v*sqrt(-m) in the basis {1, omega}, if integral
std::optional<OKElement> integral_coords(const FieldDescriptor& d, const mpq_class& u, const mpq_class& v) {
    if (d.half_integer_omega()) {
        // x + y*omega with omega=(1+sqrt(-m))/2: u = x + y/2, v = y/2
        mpq_class y = 2 * v;
        mpq_class x = u - v;
        if (y.get_den() != 1 || x.get_den() != 1) return std::nullopt;
        if (!x.get_num().fits_slong_p() || !y.get_num().fits_slong_p()) return std::nullopt;
        return OKElement{{static_cast<int64_t>(x.get_num().get_si()), static_cast<int64_t>(y.get_num().get_si())}};
    }
    if (u.get_den() != 1 || v.get_den() != 1) return std::nullopt;
    if (!u.get_num().fits_slong_p() || !v.get_num().fits_slong_p()) return std::nullopt;
    return OKElement{{static_cast<int64_t>(u.get_num().get_si()), static_cast<int64_t>(v.get_num().get_si())}};
}

/// all B in O_K with B^2 = s + t*sqrt(-m) (coordinates w.r.t. sqrt(-m))
std::vector<OKElement> ok_square_roots(const FieldDescriptor& d, const mpq_class& s, const mpq_class& t) {
    std::vector<OKElement> roots;
    auto push_if_integral = [&](const mpq_class& u, const mpq_class& v) {
        if (auto b = integral_coords(d, u, v)) roots.push_back(*b);
    };
    if (t == 0) {
        if (s == 0) {
            push_if_integral(0, 0);
            return roots;
        }
        if (s > 0) {
            if (auto u = rational_sqrt(s)) {
                push_if_integral(*u, 0);
                push_if_integral(-*u, 0);
            }
        } else {
            mpq_class v2 = -s / d.m;
            if (auto v = rational_sqrt(v2)) {
                push_if_integral(0, *v);
                push_if_integral(0, -*v);
            }
        }
        return roots;
    }
    // t != 0: u^2 = (s + w)/2 with w = sqrt(s^2 + m t^2), v = t/(2u)
    mpq_class w2 = s * s + t * t * d.m;
    auto w = rational_sqrt(w2);
    if (!w) return roots;
    mpq_class u2 = (s + *w) / 2;
    auto u = rational_sqrt(u2);
    if (!u || *u == 0) return roots;
    mpq_class v = t / (2 * *u);
    push_if_integral(*u, v);
    push_if_integral(-*u, -v);
    return roots;
}

} // namespace

EXCount count_EX(const FieldDescriptor& d, const mpq_class& X) {
    if (d.kind != FieldDescriptor::Kind::Quadratic) throw bad_input("count_EX: quadratic descriptors only");
    if (X < 1) throw bad_input("count_EX: X must be >= 1");

    mpq_class ya(X * X * X * X);
    mpq_class yb(ya * X * X);
    Disk diskA(make_disk(d, ya));
    Disk diskB(make_disk(d, yb));
    diskA.require_enumerable();
    diskB.require_enumerable();
    uint64_t countA = diskA.count();
    uint64_t countB = diskB.count();

    uint64_t delta_zero = 0;
    diskA.for_each([&](int64_t ax, int64_t ay) {
        OKElement A{{ax, ay}};
        OKElement a3 = numfield::ok_mul(d, numfield::ok_mul(d, A, A), A);
        // -4 A^3 / 27 in sqrt(-m) coordinates
        mpq_class s, t;
        if (d.half_integer_omega()) {
            s = mpq_class(a3.coords[0]) + mpq_class(a3.coords[1]) / 2;
            t = mpq_class(a3.coords[1]) / 2;
        } else {
            s = mpq_class(a3.coords[0]);
            t = mpq_class(a3.coords[1]);
        }
        s = s * -4 / 27;
        t = t * -4 / 27;
        for (const OKElement& b : ok_square_roots(d, s, t)) {
            if (diskB.contains(b.coords[0], b.coords[1])) ++delta_zero;
        }
    });

    uint64_t total = countA * countB;
    return EXCount{countA, countB, total, delta_zero, total - delta_zero};
}

} // namespace modcm::density
