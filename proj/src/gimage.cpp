#include "modcm/gimage.hpp"

#include <algorithm>
#include <cstring>
#include <functional>
#include <unordered_map>

#include "modcm/common.hpp"
#include "modcm/density.hpp"
#include "modcm/ffield.hpp"

namespace modcm::gimage {

using numfield::FieldDescriptor;
using numfield::OKElement;
using numfield::OKPair;

namespace {

int64_t mod5(int64_t v) { return ((v % 5) + 5) % 5; }

int64_t reduce_at(const OKElement& a, int64_t image, int64_t l) {
    // Horner evaluation of the coordinate vector at the generator image mod l
    int64_t acc = 0;
    for (size_t i = a.coords.size(); i-- > 0;) {
        __int128 v = static_cast<__int128>(acc) * image + a.coords[i];
        acc = static_cast<int64_t>(((v % l) + l) % l);
    }
    return acc;
}

} // namespace

uint64_t count_points_mod(int64_t a4, int64_t a6, int64_t l) {
    std::vector<int8_t> chi(static_cast<size_t>(l), -1);
    chi[0] = 0;
    for (int64_t x = 1; x <= (l - 1) / 2; ++x) chi[static_cast<size_t>(x * x % l)] = 1;
    int64_t sum = 0;
    for (int64_t x = 0; x < l; ++x) {
        int64_t v = ((x * x % l * x + a4 * x + a6) % l + l) % l;
        sum += chi[static_cast<size_t>(v)];
    }
    return static_cast<uint64_t>(l + 1 + sum);
}

std::string curve_id(const FieldDescriptor& d, const OKPair& pair) {
    std::string id = d.text();
    for (int64_t c : pair.A.coords) id += ";" + std::to_string(c);
    for (int64_t c : pair.B.coords) id += ";" + std::to_string(c);
    return id;
}

std::vector<int64_t> good_degree1_primes(const FieldDescriptor& d, const OKPair& pair, int64_t L) {
    OKElement delta = numfield::ok_discriminant(d, pair);
    int64_t disc = d.kind == FieldDescriptor::Kind::Quadratic ? d.discriminant() : d.n;
    // for cyclotomic fields disc(K) | n^phi(n); excluding l | 10n covers l | disc
    std::vector<int64_t> out;
    for (int64_t l : util::primes_up_to(L)) {
        if ((10 * std::abs(disc)) % l == 0) continue;
        if (!numfield::splits_completely(d, l)) continue;
        bool good = true;
        for (int64_t image : numfield::split_images_mod(d, l)) {
            if (reduce_at(delta, image, l) == 0) {
                good = false;
                break;
            }
        }
        if (good) out.push_back(l);
    }
    return out;
}

FrobSample frob_trace(const FieldDescriptor& d, const OKPair& pair, int64_t l, uint32_t prime_index) {
    auto images = numfield::split_images_mod(d, l);
    if (prime_index >= images.size()) throw bad_input("frob_trace: prime index out of range");
    int64_t image = images[prime_index];
    OKElement delta = numfield::ok_discriminant(d, pair);
    if (reduce_at(delta, image, l) == 0) throw bad_input("frob_trace: bad reduction at the chosen prime");
    int64_t a4 = reduce_at(pair.A, image, l);
    int64_t a6 = reduce_at(pair.B, image, l);
    uint64_t N = count_points_mod(a4, a6, l);
    int64_t a = l + 1 - static_cast<int64_t>(N);
    return FrobSample{l, prime_index, a, N};
}

WitnessFlags witness_flags(int64_t a, int64_t l) {
    if (l % 5 == 0) throw bad_input("witness_flags: l must be coprime to 5");
    WitnessFlags w;
    int64_t D = mod5(a * a - 4 * l);
    if (D == 2 || D == 3) w.nonsquare = true;
    if ((D == 1 || D == 4) && mod5(a) != 0) w.square = true;
    if (mod5(a * a - 3 * l) == 0) w.exceptional = true;
    return w;
}

ScanReport certify_sl2(const FieldDescriptor& d, const OKPair& pair, int64_t L) {
    OKElement delta = numfield::ok_discriminant(d, pair);
    if (numfield::ok_is_zero(delta)) throw bad_input("certify_sl2: singular pair");

    ScanReport rep;
    rep.curve_id = curve_id(d, pair);
    rep.L = L;
    rep.samples_used = 0;
    for (int64_t l : good_degree1_primes(d, pair, L)) {
        auto images = numfield::split_images_mod(d, l);
        for (uint32_t idx = 0; idx < images.size() && !rep.flags.all(); ++idx) {
            FrobSample s = frob_trace(d, pair, l, idx);
            WitnessFlags w = witness_flags(s.a, s.l);
            rep.flags.square |= w.square;
            rep.flags.nonsquare |= w.nonsquare;
            rep.flags.exceptional |= w.exceptional;
            ++rep.samples_used;
        }
        if (rep.flags.all()) break;
    }
    rep.certified = rep.flags.all();
    return rep;
}

// ---------------------------------------------------------------------------
// GL_2(F_5) tables and the subgroup-lattice oracle
// ---------------------------------------------------------------------------

namespace {

struct GL2Tables {
    static constexpr int kOrder = 480;
    // element id -> matrix (a,b,c,d), row major
    std::vector<std::array<int, 4>> mat;
    std::vector<uint16_t> mul;     // kOrder * kOrder
    std::vector<uint16_t> inverse;
    std::vector<int> tr, det;
    std::vector<uint16_t> sl2;     // ids with det = 1
    int id_of[625];                // packed (a,b,c,d) base 5 -> id, -1 if singular

    GL2Tables() {
        std::memset(id_of, -1, sizeof(id_of));
        for (int a = 0; a < 5; ++a)
            for (int b = 0; b < 5; ++b)
                for (int c = 0; c < 5; ++c)
                    for (int dd = 0; dd < 5; ++dd) {
                        int de = (a * dd - b * c) % 5;
                        if (de < 0) de += 5;
                        if (de == 0) continue;
                        int pack = ((a * 5 + b) * 5 + c) * 5 + dd;
                        id_of[pack] = static_cast<int>(mat.size());
                        mat.push_back({a, b, c, dd});
                        tr.push_back((a + dd) % 5);
                        det.push_back(de);
                    }
        mul.assign(kOrder * kOrder, 0);
        for (int i = 0; i < kOrder; ++i) {
            const auto& x = mat[static_cast<size_t>(i)];
            for (int j = 0; j < kOrder; ++j) {
                const auto& y = mat[static_cast<size_t>(j)];
                int a = (x[0] * y[0] + x[1] * y[2]) % 5;
                int b = (x[0] * y[1] + x[1] * y[3]) % 5;
                int c = (x[2] * y[0] + x[3] * y[2]) % 5;
                int dd = (x[2] * y[1] + x[3] * y[3]) % 5;
                mul[static_cast<size_t>(i) * kOrder + j] =
                    static_cast<uint16_t>(id_of[((a * 5 + b) * 5 + c) * 5 + dd]);
            }
        }
        inverse.assign(kOrder, 0);
        for (int i = 0; i < kOrder; ++i)
            for (int j = 0; j < kOrder; ++j)
                if (mul[static_cast<size_t>(i) * kOrder + j] == id()) {
                    inverse[static_cast<size_t>(i)] = static_cast<uint16_t>(j);
                    break;
                }
        for (int i = 0; i < kOrder; ++i)
            if (det[static_cast<size_t>(i)] == 1) sl2.push_back(static_cast<uint16_t>(i));
    }

    uint16_t id() const { return static_cast<uint16_t>(id_of[((1 * 5 + 0) * 5 + 0) * 5 + 1]); }
    uint16_t prod(uint16_t a, uint16_t b) const { return mul[static_cast<size_t>(a) * kOrder + b]; }
};

const GL2Tables& gl2() {
    static GL2Tables tables;
    return tables;
}

struct Bitset480 {
    std::array<uint64_t, 8> w{};

    bool test(uint16_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void set(uint16_t i) { w[i >> 6] |= uint64_t{1} << (i & 63); }
    int popcount() const {
        int c = 0;
        for (uint64_t v : w) c += __builtin_popcountll(v);
        return c;
    }
    bool contains(const Bitset480& o) const {
        for (size_t i = 0; i < 8; ++i)
            if ((o.w[i] & ~w[i]) != 0) return false;
        return true;
    }
    bool operator==(const Bitset480& o) const { return w == o.w; }
};

struct BitsetHash {
    size_t operator()(const Bitset480& b) const {
        uint64_t h = 0x9E3779B97F4A7C15ULL;
        for (uint64_t v : b.w) {
            h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<size_t>(h);
    }
};

struct Subgroup {
    Bitset480 members;
    std::vector<uint16_t> elems;
};

/// Closure of a seed set under multiplication. Returns nullopt (meaning: the
/// whole group) as soon as the closure exceeds the largest proper subgroup
/// order 240.
std::optional<Subgroup> close_under_mul(const std::vector<uint16_t>& seed, const Bitset480& seed_mask) {
    const GL2Tables& t = gl2();
    Subgroup sg;
    sg.members = seed_mask;
    sg.elems = seed;
    for (size_t head = 0; head < sg.elems.size(); ++head) {
        uint16_t u = sg.elems[head];
        for (size_t j = 0; j < sg.elems.size(); ++j) {
            uint16_t v = sg.elems[j];
            for (uint16_t w : {t.prod(u, v), t.prod(v, u)}) {
                if (!sg.members.test(w)) {
                    sg.members.set(w);
                    sg.elems.push_back(w);
                    if (sg.elems.size() > 240) return std::nullopt;
                }
            }
        }
    }
    return sg;
}

} // namespace

SubgroupOracleReport subgroup_oracle() {
    const GL2Tables& t = gl2();
    const int n = GL2Tables::kOrder;

    // cyclic subgroups of prime-power order; they generate the lattice under joins
    std::unordered_map<Bitset480, size_t, BitsetHash> index;
    std::vector<Subgroup> groups;
    auto add_group = [&](Subgroup sg) -> bool {
        std::sort(sg.elems.begin(), sg.elems.end());
        auto [it, fresh] = index.try_emplace(sg.members, groups.size());
        if (fresh) groups.push_back(std::move(sg));
        return fresh;
    };

    std::vector<size_t> generators; // indices of prime-power cyclic subgroups
    for (uint16_t g = 0; g < n; ++g) {
        // order of g
        int ord = 1;
        uint16_t v = g;
        while (v != t.id()) {
            v = t.prod(v, g);
            ++ord;
        }
        // keep only prime-power orders (every cyclic group is a join of those)
        int o = ord;
        int distinct = 0;
        for (int p : {2, 3, 5}) {
            if (o % p == 0) {
                ++distinct;
                while (o % p == 0) o /= p;
            }
        }
        if (o != 1 || distinct > 1) continue;
        Subgroup sg;
        v = t.id();
        sg.members.set(v);
        sg.elems.push_back(v);
        v = g;
        while (v != t.id()) {
            sg.members.set(v);
            sg.elems.push_back(v);
            v = t.prod(v, g);
        }
        size_t before = groups.size();
        if (add_group(std::move(sg))) generators.push_back(before);
    }

    // fixpoint under joins with the cyclic generators
    Bitset480 full_mask;
    for (uint16_t i = 0; i < n; ++i) full_mask.set(i);
    bool saw_full = false;

    for (size_t head = 0; head < groups.size(); ++head) {
        for (size_t gi : generators) {
            // take copies: add_group may reallocate `groups`
            Bitset480 base = groups[head].members;
            if (base.contains(groups[gi].members)) continue;
            Bitset480 seed_mask = base;
            std::vector<uint16_t> seed = groups[head].elems;
            for (uint16_t e : groups[gi].elems) {
                if (!seed_mask.test(e)) {
                    seed_mask.set(e);
                    seed.push_back(e);
                }
            }
            auto joined = close_under_mul(seed, seed_mask);
            if (!joined) {
                saw_full = true;
                continue;
            }
            add_group(std::move(*joined));
        }
    }
    if (saw_full) {
        Subgroup whole;
        whole.members = full_mask;
        for (uint16_t i = 0; i < n; ++i) whole.elems.push_back(i);
        add_group(std::move(whole));
    }

    // witness signature of a subgroup from its (trace, det) pairs
    Bitset480 sl2_mask;
    for (uint16_t s : t.sl2) sl2_mask.set(s);
    auto witness_signature = [&](const Subgroup& sg) {
        std::array<bool, 3> has{false, false, false}; // square, nonsquare, exceptional
        for (uint16_t e : sg.elems) {
            WitnessFlags w = witness_flags(t.tr[e], t.det[e]);
            has[0] = has[0] || w.square;
            has[1] = has[1] || w.nonsquare;
            has[2] = has[2] || w.exceptional;
        }
        return has;
    };

    SubgroupOracleReport rep;
    rep.subgroup_count = groups.size();
    rep.det_surjective_non_sl2 = 0;
    rep.every_such_lacks_a_witness = true;
    rep.full_group_has_all_witnesses = false;

    std::vector<size_t> checked; // det-surjective, proper, not containing SL2
    for (size_t i = 0; i < groups.size(); ++i) {
        const Subgroup& sg = groups[i];
        if (sg.elems.size() == static_cast<size_t>(n)) {
            auto has = witness_signature(sg);
            rep.full_group_has_all_witnesses = has[0] && has[1] && has[2];
            continue;
        }
        bool dets[5] = {false, false, false, false, false};
        for (uint16_t e : sg.elems) dets[t.det[e]] = true;
        if (!(dets[1] && dets[2] && dets[3] && dets[4])) continue;
        if (sg.members.contains(sl2_mask)) continue;
        ++rep.det_surjective_non_sl2;
        checked.push_back(i);
        auto has = witness_signature(sg);
        if (has[0] && has[1] && has[2]) rep.every_such_lacks_a_witness = false;
    }

    // maximal elements of the checked family, grouped by (order, signature)
    std::vector<size_t> maximal;
    for (size_t i : checked) {
        bool is_max = true;
        for (size_t j : checked) {
            if (i != j && groups[j].members.contains(groups[i].members)) {
                is_max = false;
                break;
            }
        }
        if (is_max) maximal.push_back(i);
    }
    std::vector<std::pair<std::pair<uint64_t, std::array<bool, 3>>, uint64_t>> fam;
    for (size_t i : maximal) {
        auto key = std::make_pair(static_cast<uint64_t>(groups[i].elems.size()), witness_signature(groups[i]));
        bool found = false;
        for (auto& f : fam) {
            if (f.first == key) {
                ++f.second;
                found = true;
                break;
            }
        }
        if (!found) fam.push_back({key, 1});
    }
    std::sort(fam.begin(), fam.end(), [](const auto& a, const auto& b) { return a.first.first > b.first.first; });
    for (const auto& f : fam)
        rep.maximal_families.push_back({f.first.first, f.second, f.first.second});

    std::unordered_map<uint64_t, uint64_t> hist;
    for (const auto& g : groups) ++hist[g.elems.size()];
    rep.order_histogram.assign(hist.begin(), hist.end());
    std::sort(rep.order_histogram.begin(), rep.order_histogram.end());

    return rep;
}

bool is_perfect_sl2() {
    const GL2Tables& t = gl2();
    // commutators of SL_2(F_5)
    Bitset480 comm_mask;
    std::vector<uint16_t> comms;
    for (uint16_t g : t.sl2) {
        for (uint16_t h : t.sl2) {
            uint16_t c = t.prod(t.prod(g, h), t.prod(t.inverse[g], t.inverse[h]));
            if (!comm_mask.test(c)) {
                comm_mask.set(c);
                comms.push_back(c);
            }
        }
    }
    auto closed = close_under_mul(comms, comm_mask);
    if (!closed) return false; // exceeded SL2: impossible, commutators have det 1
    return closed->elems.size() == t.sl2.size();
}

std::optional<int64_t> dg_find(const FieldDescriptor& d, const OKPair& pair, int64_t Lmax) {
    for (int64_t l : good_degree1_primes(d, pair, Lmax)) {
        auto images = numfield::split_images_mod(d, l);
        bool ok = true;
        for (uint32_t idx = 0; idx < images.size(); ++idx) {
            FrobSample s = frob_trace(d, pair, l, idx);
            int64_t a = s.a;
            if (mod5(a * a - 4 * l) == 0 || mod5(a - (1 + l)) == 0 || mod5(a + (1 + l)) == 0) {
                ok = false;
                break;
            }
        }
        if (ok) return l;
    }
    return std::nullopt;
}

HeightScanReport scan_heights(const FieldDescriptor& d, const std::vector<mpq_class>& X_list, uint64_t samples,
                              uint64_t seed) {
    if (d.kind != FieldDescriptor::Kind::Quadratic) throw bad_input("scan_heights: quadratic descriptors only");
    if (samples < 1) throw bad_input("scan_heights: samples must be positive");
    const int64_t L = 1000;

    HeightScanReport rep;
    rep.seed = seed;
    rep.L = L;
    for (size_t xi = 0; xi < X_list.size(); ++xi) {
        density::PairSampler sampler(d, X_list[xi]);

        std::function<uint64_t(int64_t, int64_t)> chunk = [&](int64_t b, int64_t e) {
            uint64_t uncert = 0;
            for (int64_t i = b; i < e; ++i) {
                uint64_t stream = (static_cast<uint64_t>(xi) << 40) | static_cast<uint64_t>(i);
                util::SplitMix64 rng = util::substream(seed, stream);
                OKPair pair = sampler.draw(rng);
                while (numfield::ok_is_zero(numfield::ok_discriminant(d, pair))) pair = sampler.draw(rng);
                if (!certify_sl2(d, pair, L).certified) ++uncert;
            }
            return uncert;
        };
        std::function<void(uint64_t&, const uint64_t&)> merge = [](uint64_t& a, const uint64_t& b) { a += b; };
        uint64_t uncert = util::parallel_chunks<uint64_t>(static_cast<int64_t>(samples), chunk, merge);

        HeightScanPoint pt;
        pt.X = X_list[xi];
        pt.samples = samples;
        pt.uncertified = uncert;
        pt.fraction = static_cast<double>(uncert) / static_cast<double>(samples);
        pt.ci = util::wilson95(uncert, samples);
        rep.points.push_back(pt);
    }
    return rep;
}

Checklist checklist(const FieldDescriptor& d, const OKPair& pair, int64_t L) {
    Checklist out;
    out.image_scan = certify_sl2(d, pair, L);
    out.image = out.image_scan.certified ? Checklist::Status::Verified : Checklist::Status::Inconclusive;

    out.ordinary = Checklist::Status::Verified;
    for (const auto& map : numfield::reduction_maps(d)) {
        auto a_img = numfield::reduce_element(pair.A, map);
        auto b_img = numfield::reduce_element(pair.B, map);
        auto four = ffield::FFElem::from_int(map.target, 4);
        auto twenty7 = ffield::FFElem::from_int(map.target, 27);
        auto delta = four * a_img * a_img * a_img + twenty7 * b_img * b_img;
        if (a_img.is_zero() || delta.is_zero()) {
            out.ordinary = Checklist::Status::Inconclusive;
            break;
        }
    }

    out.dg_prime = dg_find(d, pair, L);
    if (out.dg_prime) {
        out.generic = Checklist::Status::Verified;
    } else if (out.image == Checklist::Status::Verified) {
        // base field is Galois, so a certified image already forces a
        // decomposed generic representation
        out.generic = Checklist::Status::Inferred;
    } else {
        out.generic = Checklist::Status::Inconclusive;
    }

    out.all_verified = out.image == Checklist::Status::Verified &&
                       out.ordinary == Checklist::Status::Verified &&
                       out.generic != Checklist::Status::Inconclusive;
    return out;
}

} // namespace modcm::gimage
