#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "modcm/common.hpp"
#include "modcm/ffield.hpp"
#include "modcm/util.hpp"
#include "oracles.hpp"

using namespace modcm;
using ffield::FFElem;
using ffield::FieldRef;
using ffield::make_field;

TEST_CASE("canonical moduli match an independent exhaustive search") {
    // oracle: scan candidates in the same integer-encoding order, but decide
    // irreducibility by trial division instead of the Frobenius/gcd test
    auto oracle_modulus = [](uint32_t p, uint32_t f) {
        uint64_t count = 1;
        for (uint32_t i = 0; i < f; ++i) count *= p;
        for (uint64_t k = 0; k < count; ++k) {
            fppoly::Poly cand(f + 1, 0);
            uint64_t v = k;
            for (uint32_t i = 0; i < f; ++i) {
                cand[i] = static_cast<uint32_t>(v % p);
                v /= p;
            }
            cand[f] = 1;
            if (oracles::irreducible_by_trial_division(cand, p)) return cand;
        }
        return fppoly::Poly{};
    };

    CHECK(make_field(5, 1)->modulus == fppoly::Poly{0, 1});       // x
    CHECK(make_field(5, 2)->modulus == fppoly::Poly{2, 0, 1});    // x^2 + 2
    CHECK(make_field(5, 3)->modulus == fppoly::Poly{1, 1, 0, 1}); // x^3 + x + 1
    for (uint32_t p : {5u, 7u, 11u, 13u}) {
        for (uint32_t f = 1; f <= 3; ++f) {
            CAPTURE(p);
            CAPTURE(f);
            CHECK(make_field(p, f)->modulus == oracle_modulus(p, f));
        }
    }
}

TEST_CASE("construction rejects bad characteristics and the size cap") {
    CHECK_THROWS_AS(make_field(2, 1), bad_input);
    CHECK_THROWS_AS(make_field(3, 2), bad_input);
    CHECK_THROWS_AS(make_field(4, 1), bad_input);
    CHECK_THROWS_AS(make_field(5, 9), cap_exceeded); // 5^9 > 2^20
    CHECK_NOTHROW(make_field(5, 8));                 // 5^8 = 390625
}

TEST_CASE("make_field is referentially transparent") {
    FieldRef a = make_field(5, 2);
    FieldRef b = make_field(5, 2);
    CHECK(a->modulus == b->modulus);
    CHECK(a->q == 25);
    // elements built from separately obtained specs interoperate
    CHECK(FFElem::from_int(a, 2) + FFElem::from_int(b, 3) == FFElem::zero(a));
}

TEST_CASE("arithmetic examples in F_25") {
    FieldRef f25 = make_field(5, 2);
    FFElem x = FFElem::from_index(f25, 5); // coefficient vector (0,1)
    CHECK(x * x == FFElem::from_int(f25, 3)); // x^2 = -2 = 3 mod (x^2+2)
    CHECK(inv(FFElem::one(f25)) == FFElem::one(f25));
    CHECK_THROWS_AS(inv(FFElem::zero(f25)), bad_input);
}

TEST_CASE("mixed-field operands are rejected") {
    FieldRef f25 = make_field(5, 2);
    FieldRef f7 = make_field(7, 1);
    CHECK_THROWS_AS(FFElem::one(f25) + FFElem::one(f7), bad_input);
    CHECK_THROWS_AS(FFElem::one(f25) * FFElem::one(f7), bad_input);
}

TEST_CASE("Frobenius fixed point: a^q = a for every element") {
    for (auto [p, f] : std::vector<std::pair<uint32_t, uint32_t>>{{5, 1}, {5, 2}, {5, 3}, {7, 2}}) {
        FieldRef field = make_field(p, f);
        for (const FFElem& a : ffield::enumerate(field)) CHECK(pow(a, field->q) == a);
    }
}

TEST_CASE("quadratic residues") {
    FieldRef f5 = make_field(5, 1);
    CHECK(is_square(FFElem::from_int(f5, 4)));
    CHECK(is_square(FFElem::from_int(f5, 1)));
    CHECK_FALSE(is_square(FFElem::from_int(f5, 2)));
    CHECK_FALSE(is_square(FFElem::from_int(f5, 3)));
    CHECK_THROWS_AS(is_square(FFElem::zero(f5)), bad_input);

    // even powers of a generator are squares, odd powers are not
    FieldRef f25 = make_field(5, 2);
    FFElem g = FFElem::zero(f25);
    for (uint64_t k = 1; k < 25; ++k) {
        FFElem cand = FFElem::from_index(f25, k);
        bool is_gen = true;
        for (uint64_t d : {2ull, 3ull}) { // prime divisors of 24
            if (pow(cand, 24 / d) == FFElem::one(f25)) is_gen = false;
        }
        if (is_gen) {
            g = cand;
            break;
        }
    }
    REQUIRE_FALSE(g.is_zero());
    CHECK(is_square(g * g));
    CHECK_FALSE(is_square(g * g * g));
}

TEST_CASE("enumerate: order, size, first elements") {
    FieldRef f5 = make_field(5, 1);
    auto e5 = ffield::enumerate(f5);
    REQUIRE(e5.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(e5[static_cast<size_t>(i)] == FFElem::from_int(f5, i));

    FieldRef f25 = make_field(5, 2);
    auto e25 = ffield::enumerate(f25);
    REQUIRE(e25.size() == 25);
    CHECK(e25[0] == FFElem::zero(f25));
    CHECK(e25[1] == FFElem::one(f25));
    std::set<uint64_t> indices;
    for (const auto& a : e25) indices.insert(a.index());
    CHECK(indices.size() == 25); // distinct

    CHECK(ffield::enumerate(make_field(5, 3)).size() == 125);
}

TEST_CASE("field axioms on random triples") {
    for (auto [p, f] : std::vector<std::pair<uint32_t, uint32_t>>{{5, 1}, {5, 3}, {7, 2}, {13, 1}}) {
        FieldRef field = make_field(p, f);
        util::SplitMix64 rng = util::substream(12345, p * 100 + f);
        for (int i = 0; i < 200; ++i) {
            FFElem a = FFElem::from_index(field, rng.below(field->q));
            FFElem b = FFElem::from_index(field, rng.below(field->q));
            FFElem c = FFElem::from_index(field, rng.below(field->q));
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * b == b * a);
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a - b == -(b - a));
            if (!a.is_zero()) CHECK(a * inv(a) == FFElem::one(field));
        }
    }
}

TEST_CASE("the multiplicative group has an element of order q-1") {
    for (auto [p, f] : std::vector<std::pair<uint32_t, uint32_t>>{{5, 1}, {5, 2}, {5, 3}, {7, 2}, {11, 1}}) {
        FieldRef field = make_field(p, f);
        uint64_t order = field->q - 1;
        std::vector<uint64_t> prime_divs;
        uint64_t v = order;
        for (uint64_t q = 2; q * q <= v; ++q) {
            if (v % q == 0) {
                prime_divs.push_back(q);
                while (v % q == 0) v /= q;
            }
        }
        if (v > 1) prime_divs.push_back(v);

        bool found = false;
        for (const FFElem& a : ffield::enumerate(field)) {
            if (a.is_zero()) continue;
            bool generator = true;
            for (uint64_t q : prime_divs) {
                if (pow(a, order / q) == FFElem::one(field)) {
                    generator = false;
                    break;
                }
            }
            if (generator) {
                found = true;
                break;
            }
        }
        CHECK(found);
    }
}
