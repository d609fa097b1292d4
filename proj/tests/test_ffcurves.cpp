#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "modcm/common.hpp"
#include "modcm/ffcurves.hpp"
#include "oracles.hpp"

using namespace modcm;
using ffcurves::CurveClass;
using ffcurves::FFPair;
using ffield::FFElem;
using ffield::FieldRef;

namespace {

FFPair pair_over(const FieldRef& field, int64_t a, int64_t b) {
    return FFPair{FFElem::from_int(field, a), FFElem::from_int(field, b)};
}

} // namespace

TEST_CASE("discriminant values over F_5") {
    FieldRef f5 = ffield::make_field(5, 1);
    CHECK(ffcurves::discriminant(pair_over(f5, 0, 0)) == FFElem::zero(f5));
    CHECK(ffcurves::discriminant(pair_over(f5, 0, 1)) == FFElem::from_int(f5, 3)); // -432 mod 5
    CHECK(ffcurves::discriminant(pair_over(f5, 1, 1)) == FFElem::from_int(f5, 4)); // -496 mod 5
}

TEST_CASE("x^{p-1} coefficient: p=5 closed form 2A") {
    FieldRef f5 = ffield::make_field(5, 1);
    CHECK(ffcurves::deuring_coefficient(pair_over(f5, 1, 1)) == FFElem::from_int(f5, 2));
    for (int64_t b = 0; b < 5; ++b)
        CHECK(ffcurves::deuring_coefficient(pair_over(f5, 0, b)) == FFElem::zero(f5));
    // 2A for every pair over F_25 as well
    FieldRef f25 = ffield::make_field(5, 2);
    for (uint64_t ai = 0; ai < 25; ++ai) {
        FFPair pr{FFElem::from_index(f25, ai), FFElem::from_index(f25, 7)};
        CHECK(ffcurves::deuring_coefficient(pr) == FFElem::from_int(f25, 2) * pr.A);
    }
}

TEST_CASE("x^{p-1} coefficient agrees with full symbolic expansion for p = 7, 11, 13") {
    for (uint32_t p : {7u, 11u, 13u}) {
        FieldRef field = ffield::make_field(p, 1);
        for (int64_t a = 0; a < p; ++a) {
            for (int64_t b = 0; b < p; ++b) {
                FFPair pr = pair_over(field, a, b);
                CHECK(ffcurves::deuring_coefficient(pr) ==
                      oracles::expansion_coefficient(pr.A, pr.B, (p - 1) / 2, p - 1));
            }
        }
    }
    // the expansion oracle settles the p=7 case: (x^3+x)^3 has no x^6 term
    FieldRef f7 = ffield::make_field(7, 1);
    CHECK(oracles::expansion_coefficient(FFElem::one(f7), FFElem::zero(f7), 3, 6) == FFElem::zero(f7));
    CHECK(ffcurves::deuring_coefficient(pair_over(f7, 1, 0)) == FFElem::zero(f7));
}

TEST_CASE("classification examples over F_5") {
    FieldRef f5 = ffield::make_field(5, 1);
    CHECK(ffcurves::classify(pair_over(f5, 0, 0)) == CurveClass::Singular);
    CHECK(ffcurves::classify(pair_over(f5, 0, 1)) == CurveClass::Supersingular);
    CHECK(ffcurves::classify(pair_over(f5, 1, 1)) == CurveClass::Ordinary);
}

TEST_CASE("point counts over F_5 against the double-loop oracle") {
    FieldRef f5 = ffield::make_field(5, 1);
    struct Row {
        int64_t a, b;
        uint64_t n;
    };
    for (Row row : {Row{0, 1, 6}, Row{1, 1, 9}, Row{1, 0, 4}}) {
        FFPair pr = pair_over(f5, row.a, row.b);
        CHECK(ffcurves::count_points(pr) == row.n);
        CHECK(ffcurves::count_points(pr) == oracles::naive_point_count(pr.A, pr.B));
    }
    CHECK_THROWS_AS(ffcurves::count_points(pair_over(f5, 0, 0)), bad_input);

    CHECK(ffcurves::is_supersingular_trace(pair_over(f5, 0, 1)));      // t = 0
    CHECK_FALSE(ffcurves::is_supersingular_trace(pair_over(f5, 1, 1))); // t = -3
    CHECK_FALSE(ffcurves::is_supersingular_trace(pair_over(f5, 1, 0))); // t = 2
}

TEST_CASE("census equals the sharpened counts (q^2, q, q-1, (q-1)^2)") {
    for (uint32_t f = 1; f <= 3; ++f) {
        auto c = ffcurves::census(f);
        uint64_t q = c.q;
        CHECK(c.total == q * q);
        CHECK(c.singular == q);
        CHECK(c.supersingular == q - 1);
        CHECK(c.ordinary == (q - 1) * (q - 1));
        CHECK(c.singular + c.supersingular + c.ordinary == c.total);
    }
    CHECK(ffcurves::census(1).total == 25);
    CHECK(ffcurves::census(2).total == 625);
    CHECK(ffcurves::census(3).total == 15625);
    CHECK_THROWS_AS(ffcurves::census(6), bad_input);
    CHECK_THROWS_AS(ffcurves::census(0), bad_input);
}

TEST_CASE("coefficient test matches the trace test on every nonsingular pair, f <= 2") {
    // f = 3 runs in the acceptance suite; keep the unit test quick
    for (uint32_t f = 1; f <= 2; ++f) {
        FieldRef field = ffield::make_field(5, f);
        const uint64_t q = field->q;
        for (uint64_t ai = 0; ai < q; ++ai) {
            for (uint64_t bi = 0; bi < q; ++bi) {
                FFPair pr{FFElem::from_index(field, ai), FFElem::from_index(field, bi)};
                if (ffcurves::discriminant(pr).is_zero()) continue;
                bool deuring = ffcurves::classify(pr) == CurveClass::Supersingular;
                CHECK(deuring == ffcurves::is_supersingular_trace(pr));
                // Hasse bound on the trace
                int64_t t = static_cast<int64_t>(q) + 1 - static_cast<int64_t>(ffcurves::count_points(pr));
                CHECK(static_cast<double>(t) * t <= 4.0 * static_cast<double>(q));
            }
        }
    }
}
