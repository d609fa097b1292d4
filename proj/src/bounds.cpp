#include "modcm/bounds.hpp"

#include <cmath>

#include "modcm/common.hpp"
#include "modcm/util.hpp"

namespace modcm::bounds {

std::string BoundResult::exact_str() const {
    return exact.get_num().get_str() + "/" + exact.get_den().get_str();
}

std::string BoundResult::decimal() const { return util::decimal12(exact); }

double BoundResult::value() const { return util::to_double_nearest(exact); }

BoundResult lower_bound(const numfield::SplittingData& s) {
    if (s.f < 1 || s.r < 1 || s.e < 1) throw bad_input("lower_bound: e, f, r must all be >= 1");
    mpz_class qf;
    mpz_ui_pow_ui(qf.get_mpz_t(), 5, s.f);
    mpz_class num_base = qf - 1;
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), num_base.get_mpz_t(), 2ul * s.r);
    mpz_pow_ui(den.get_mpz_t(), qf.get_mpz_t(), 2ul * s.r);
    mpq_class exact(num, den);
    exact.canonicalize();
    return BoundResult{s.e, s.f, s.r, exact};
}

BoundResult generic_bound(uint32_t degree) {
    if (degree < 2 || degree % 2 != 0) throw bad_input("generic_bound: CM fields have even degree >= 2");
    return lower_bound(numfield::SplittingData{1, 1, degree});
}

double envelope(int64_t n) {
    if (n < 2) throw bad_input("envelope: n must be >= 2");

    // exact path when n+1 = 5^k and the exponent 2n/k is an integer
    {
        int64_t v = n + 1;
        int64_t k = 0;
        while (v % 5 == 0) {
            v /= 5;
            ++k;
        }
        if (v == 1 && k >= 1 && (2 * n) % k == 0) {
            unsigned long e = static_cast<unsigned long>(2 * n / k);
            mpz_class num, den;
            mpz_ui_pow_ui(num.get_mpz_t(), static_cast<unsigned long>(n), e);
            mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(n + 1), e);
            return util::to_double_nearest(mpq_class(num, den));
        }
    }

    double nn = static_cast<double>(n);
    double exponent = 2.0 * nn * std::log(5.0) / std::log(nn + 1.0);
    return std::exp(exponent * std::log1p(-1.0 / (nn + 1.0)));
}

ThresholdReport threshold(double eps, int64_t scan_max) {
    if (!(eps > 0.0 && eps < 1.0)) throw bad_input("threshold: eps must lie in (0,1)");
    if (scan_max < 2) throw bad_input("threshold: scan_max must be >= 2");
    const double target = 1.0 - eps;
    if (envelope(scan_max) < target) throw bad_input("threshold: scan_max insufficient, envelope(scan_max) < 1-eps");

    std::vector<double> env(static_cast<size_t>(scan_max) + 1, 0.0);
    for (int64_t n = 2; n <= scan_max; ++n) env[static_cast<size_t>(n)] = envelope(n);

    int64_t last_fail = 1; // sentinel: N = 2 when nothing fails
    for (int64_t n = 2; n <= scan_max; ++n) {
        if (env[static_cast<size_t>(n)] < target) last_fail = n;
    }
    int64_t N = last_fail + 1;

    int64_t monotone_from = 2;
    for (int64_t n = scan_max - 1; n >= 2; --n) {
        if (env[static_cast<size_t>(n + 1)] < env[static_cast<size_t>(n)]) {
            monotone_from = n + 1;
            break;
        }
    }

    return ThresholdReport{eps, scan_max, N, monotone_from, env[static_cast<size_t>(N)]};
}

} // namespace modcm::bounds
