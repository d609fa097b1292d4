#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>

#include "modcm/common.hpp"
#include "modcm/numfield.hpp"
#include "modcm/util.hpp"

using namespace modcm;
using numfield::FieldDescriptor;
using numfield::make_cyclotomic;
using numfield::make_quadratic;
using numfield::OKElement;

TEST_CASE("descriptor normalization and admissibility") {
    CHECK(make_quadratic(1).text() == "Q(sqrt-1)");
    CHECK(make_quadratic(3).half_integer_omega());
    CHECK_FALSE(make_quadratic(5).half_integer_omega());
    CHECK_THROWS_AS(make_quadratic(12), bad_input); // not squarefree
    CHECK_THROWS_AS(make_quadratic(0), bad_input);
    CHECK_THROWS_AS(make_quadratic(-3), bad_input);

    CHECK(make_cyclotomic(6).n == 3);  // Q(zeta_6) = Q(zeta_3)
    CHECK(make_cyclotomic(4).n == 4);
    CHECK_THROWS_AS(make_cyclotomic(10), bad_input); // normalizes to 5, zeta_5 inside
    CHECK_THROWS_AS(make_cyclotomic(15), bad_input); // 5 | n
    CHECK_THROWS_AS(make_cyclotomic(1), bad_input);
    CHECK_THROWS_AS(make_cyclotomic(2), bad_input);  // normalizes to 1

    CHECK(numfield::parse_descriptor("Q(sqrt-2)") == make_quadratic(2));
    CHECK(numfield::parse_descriptor("Q(zeta8)") == make_cyclotomic(8));
    CHECK_THROWS_AS(numfield::parse_descriptor("Q(sqrt2)"), bad_input);
    CHECK_THROWS_AS(numfield::parse_descriptor("nonsense"), bad_input);
}

TEST_CASE("splitting of 5") {
    auto check = [](const FieldDescriptor& d, uint32_t e, uint32_t f, uint32_t r) {
        auto s = numfield::splitting_of_5(d);
        CHECK(s.e == e);
        CHECK(s.f == f);
        CHECK(s.r == r);
    };
    check(make_quadratic(1), 1, 1, 2);  // -1 = 4 square mod 5
    check(make_quadratic(2), 1, 2, 1);  // -2 = 3 nonsquare
    check(make_quadratic(5), 2, 1, 1);  // ramified
    check(make_quadratic(19), 1, 1, 2); // -19 = 1 mod 5
    check(make_quadratic(3), 1, 2, 1);
    check(make_cyclotomic(3), 1, 2, 1);  // ord_3(5) = 2
    check(make_cyclotomic(11), 1, 5, 2); // ord_11(5) = 5
    check(make_cyclotomic(4), 1, 1, 2);  // 5 = 1 mod 4
}

TEST_CASE("e*f*r = [K:Q] across both families") {
    for (int64_t m = 1; m <= 1000; ++m) {
        if (!util::is_squarefree(m)) continue;
        auto s = numfield::splitting_of_5(make_quadratic(m));
        CHECK(static_cast<int64_t>(s.e) * s.f * s.r == 2);
    }
    for (int64_t n = 3; n <= 1000; ++n) {
        if (n % 4 == 2 || n % 5 == 0) continue;
        auto d = make_cyclotomic(n);
        auto s = numfield::splitting_of_5(d);
        CHECK(static_cast<int64_t>(s.e) * s.f * s.r == d.degree());
    }
}

TEST_CASE("cyclotomic factorization mod 5: pinned small cases") {
    CHECK(numfield::cyclotomic_factor_mod5(3) == std::vector<fppoly::Poly>{{1, 1, 1}});      // x^2+x+1
    CHECK(numfield::cyclotomic_factor_mod5(4) == std::vector<fppoly::Poly>{{2, 1}, {3, 1}}); // roots -2, -3
    auto f8 = numfield::cyclotomic_factor_mod5(8);
    REQUIRE(f8.size() == 2);
    CHECK(fppoly::degree(f8[0]) == 2);
    CHECK(fppoly::degree(f8[1]) == 2);
    CHECK(fppoly::mul(f8[0], f8[1], 5) == fppoly::cyclotomic_mod_p(8, 5)); // x^4 + 1
}

TEST_CASE("cyclotomic factor shape for all admissible n <= 500, via gcd oracle") {
    // Oracle route: Phi_n mod 5 squarefree, plus gcd(x^{5^d mod n} - x, Phi_n)
    // constant for the maximal proper divisors d of f. This forces every
    // irreducible factor to have degree exactly f = ord_n(5), hence
    // phi(n)/f factors, without constructing any factor.
    for (int64_t n = 3; n <= 500; ++n) {
        if (n % 5 == 0) continue;
        CAPTURE(n);
        int64_t f = util::multiplicative_order(5, n);
        int64_t phi_n = util::euler_phi(n);
        REQUIRE(phi_n % f == 0);
        fppoly::Poly phi = fppoly::cyclotomic_mod_p(n, 5);
        REQUIRE(fppoly::degree(phi) == phi_n);

        // squarefree
        fppoly::Poly der = fppoly::derivative(phi, 5);
        CHECK(fppoly::degree(fppoly::gcd(phi, der, 5)) == 0);

        // 5^f = 1 mod n, so x^{5^f} = x mod Phi_n via x^n = 1
        CHECK(util::pow_mod_u64(5, static_cast<uint64_t>(f), static_cast<uint64_t>(n)) == 1);

        // no factor of degree dividing a maximal proper divisor of f
        for (int64_t p : {2, 3, 5, 7, 11, 13}) {
            if (f % p != 0) continue;
            int64_t d = f / p;
            int64_t s = static_cast<int64_t>(util::pow_mod_u64(5, static_cast<uint64_t>(d), static_cast<uint64_t>(n)));
            fppoly::Poly xs = fppoly::x_power(s);
            fppoly::Poly probe = fppoly::sub(xs, fppoly::Poly{0, 1}, 5);
            CHECK(fppoly::degree(fppoly::gcd(probe, phi, 5)) <= 0);
        }
        // remaining prime divisors of f beyond 13 do not occur for n <= 500
        // with 5^f <= representable, but guard the assumption:
        int64_t rest = f;
        for (int64_t p : {2, 3, 5, 7, 11, 13})
            while (rest % p == 0) rest /= p;
        if (rest > 1) {
            int64_t d = f / rest;
            int64_t s = static_cast<int64_t>(util::pow_mod_u64(5, static_cast<uint64_t>(d), static_cast<uint64_t>(n)));
            fppoly::Poly probe = fppoly::sub(fppoly::x_power(s), fppoly::Poly{0, 1}, 5);
            CHECK(fppoly::degree(fppoly::gcd(probe, phi, 5)) <= 0);
        }
    }
}

TEST_CASE("explicit factors agree with the shape for representable degrees") {
    for (int64_t n : {3, 4, 7, 8, 9, 11, 12, 13, 16, 24, 33}) {
        CAPTURE(n);
        int64_t f = util::multiplicative_order(5, n);
        if (f > 8) continue;
        auto factors = numfield::cyclotomic_factor_mod5(n);
        CHECK(static_cast<int64_t>(factors.size()) == util::euler_phi(n) / f);
        fppoly::Poly prod{1};
        for (const auto& g : factors) {
            CHECK(fppoly::degree(g) == f);
            prod = fppoly::mul(prod, g, 5);
        }
        CHECK(prod == fppoly::cyclotomic_mod_p(n, 5));
    }
}

TEST_CASE("reduction maps: quadratic examples") {
    using ffield::FFElem;
    auto maps1 = numfield::reduction_maps(make_quadratic(1)); // split: i -> 2, 3
    REQUIRE(maps1.size() == 2);
    CHECK(maps1[0].generator_image == FFElem::from_int(maps1[0].target, 2));
    CHECK(maps1[1].generator_image == FFElem::from_int(maps1[1].target, 3));
    CHECK(maps1[0].prime_index == 0);
    CHECK(maps1[1].prime_index == 1);

    auto maps5 = numfield::reduction_maps(make_quadratic(5)); // ramified: sqrt(-5) -> 0
    REQUIRE(maps5.size() == 1);
    CHECK(maps5[0].generator_image.is_zero());

    auto maps2 = numfield::reduction_maps(make_quadratic(2)); // inert
    REQUIRE(maps2.size() == 1);
    CHECK(maps2[0].target->q == 25);
}

TEST_CASE("generator minimal polynomial vanishes at every generator image") {
    using ffield::FFElem;
    std::vector<FieldDescriptor> fields = {make_quadratic(1), make_quadratic(2),  make_quadratic(3),
                                           make_quadratic(5), make_quadratic(7),  make_quadratic(19),
                                           make_cyclotomic(3), make_cyclotomic(4), make_cyclotomic(8),
                                           make_cyclotomic(12)};
    for (const auto& d : fields) {
        CAPTURE(d.text());
        auto s = numfield::splitting_of_5(d);
        auto maps = numfield::reduction_maps(d);
        CHECK(maps.size() == s.r);
        auto mp = numfield::generator_min_poly(d);
        uint64_t qf = 1;
        for (uint32_t i = 0; i < s.f; ++i) qf *= 5;
        for (const auto& map : maps) {
            CHECK(map.target->q == qf);
            FFElem acc = FFElem::zero(map.target);
            for (size_t i = mp.size(); i-- > 0;)
                acc = acc * map.generator_image + FFElem::from_int(map.target, mp[i]);
            CHECK(acc.is_zero());
        }
    }
    // split maps disagree on the generator
    for (int64_t m : {1, 11, 19}) {
        auto maps = numfield::reduction_maps(make_quadratic(m));
        REQUIRE(maps.size() == 2);
        CHECK(maps[0].generator_image != maps[1].generator_image);
    }
}

TEST_CASE("reduce_element examples over Q(i)") {
    using ffield::FFElem;
    auto d = make_quadratic(1);
    auto maps = numfield::reduction_maps(d);
    OKElement one = numfield::ok_from_int(d, 1);
    CHECK(numfield::reduce_element(one, maps[0]) == FFElem::one(maps[0].target));
    CHECK(numfield::reduce_element(one, maps[1]) == FFElem::one(maps[1].target));

    OKElement a = numfield::ok_make(d, {3, 1}); // 3 + i
    CHECK(numfield::reduce_element(a, maps[0]).is_zero());                                  // 3 + 2 = 5
    CHECK(numfield::reduce_element(a, maps[1]) == FFElem::one(maps[1].target));             // 3 + 3 = 6
}

TEST_CASE("reduction is a ring homomorphism on random elements") {
    std::vector<FieldDescriptor> fields = {make_quadratic(1), make_quadratic(3), make_quadratic(2),
                                           make_cyclotomic(3), make_cyclotomic(4), make_cyclotomic(8)};
    for (const auto& d : fields) {
        CAPTURE(d.text());
        auto maps = numfield::reduction_maps(d);
        util::SplitMix64 rng = util::substream(777, static_cast<uint64_t>(d.degree() * 1000 + d.m + d.n));
        for (int i = 0; i < 1000; ++i) {
            std::vector<int64_t> ca, cb;
            for (int64_t j = 0; j < d.degree(); ++j) {
                ca.push_back(rng.in_range(-50, 50));
                cb.push_back(rng.in_range(-50, 50));
            }
            OKElement a = numfield::ok_make(d, ca);
            OKElement b = numfield::ok_make(d, cb);
            OKElement sum = numfield::ok_add(d, a, b);
            OKElement prod = numfield::ok_mul(d, a, b);
            for (const auto& map : maps) {
                auto ra = numfield::reduce_element(a, map);
                auto rb = numfield::reduce_element(b, map);
                CHECK(numfield::reduce_element(sum, map) == ra + rb);
                CHECK(numfield::reduce_element(prod, map) == ra * rb);
            }
        }
    }
}

TEST_CASE("degree-1 images above split primes") {
    auto d = make_quadratic(1);
    CHECK(numfield::splits_completely(d, 13));
    CHECK_FALSE(numfield::splits_completely(d, 7)); // 7 = 3 mod 4
    auto img = numfield::split_images_mod(d, 13);   // roots of x^2 + 1 mod 13
    CHECK(img == std::vector<int64_t>{5, 8});
    CHECK_THROWS_AS(numfield::split_images_mod(d, 7), bad_input);

    auto dz = make_cyclotomic(3);
    CHECK(numfield::splits_completely(dz, 7));
    CHECK_FALSE(numfield::splits_completely(dz, 11));
    auto imgz = numfield::split_images_mod(dz, 7); // primitive cube roots mod 7
    REQUIRE(imgz.size() == 2);
    for (int64_t z : imgz) {
        CHECK((z * z * z) % 7 == 1);
        CHECK(z != 1);
    }
}

TEST_CASE("O_K arithmetic stays exact and rejects overflow") {
    auto d = make_quadratic(3);
    OKElement w = numfield::ok_make(d, {0, 1});
    // omega^2 = omega - 1 for m = 3
    CHECK(numfield::ok_mul(d, w, w) == numfield::ok_make(d, {-1, 1}));

    auto dz = make_cyclotomic(8);
    OKElement z = numfield::ok_make(dz, {0, 1, 0, 0});
    OKElement z2 = numfield::ok_mul(dz, z, z);
    OKElement z4 = numfield::ok_mul(dz, z2, z2);
    CHECK(z4 == numfield::ok_make(dz, {-1, 0, 0, 0})); // zeta_8^4 = -1

    OKElement big = numfield::ok_make(d, {int64_t{1} << 62, 0});
    CHECK_THROWS_AS(numfield::ok_mul(d, big, big), cap_exceeded);
}
