#include "aura/error.hpp"
#include "aura/random.hpp"
#include "aura/reliability.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace aura;

namespace {

double boost_tail(double f, double d1, double d2) {
    return boost::math::cdf(boost::math::complement(boost::math::fisher_f_distribution<double>(d1, d2), f));
}

}  // namespace

TEST_CASE("4x3 ANOVA against exact hand sums") {
    // Sums of squares worked with rational arithmetic:
    // SS_T = 83, SS_subjects = 17, SS_raters = 62, SS_E = 4 (residual route agrees),
    // MS_R = 17/3, MS_C = 31, MS_E = 2/3, ICC(3,k) = 15/17, F = 17/2.
    const auto m = RatingMatrix::from_rows({{9, 2, 5}, {6, 1, 3}, {8, 4, 6}, {7, 1, 2}});
    const auto r = icc_3k(m);
    CHECK(std::abs(r.ms_subjects - 17.0 / 3) <= 1e-9);
    CHECK(std::abs(r.ms_raters - 31.0) <= 1e-9);
    CHECK(std::abs(r.ms_error - 2.0 / 3) <= 1e-9);
    CHECK(std::abs(r.icc - 15.0 / 17) <= 1e-9);
    CHECK(std::abs(r.f - 8.5) <= 1e-9);
    CHECK(r.df1 == 3);
    CHECK(r.df2 == 6);
    CHECK(r.rater_df1 == 2);
    CHECK(std::abs(r.rater_f - 46.5) <= 1e-9);
    CHECK(std::abs(r.p - boost_tail(8.5, 3, 6)) <= 1e-12);
    CHECK(std::abs(r.rater_p - boost_tail(46.5, 2, 6)) <= 1e-12);
}

TEST_CASE("identical raters give ICC 1") {
    const auto m = RatingMatrix::from_rows({{1, 1, 1}, {3, 3, 3}, {5, 5, 5}, {2, 2, 2}});
    const auto r = icc_3k(m);
    CHECK(r.icc == 1.0);
    CHECK(r.p == 0.0);
}

TEST_CASE("rater offsets do not change consistency ICC") {
    const auto m = RatingMatrix::from_rows({{1, 2, 3}, {3, 4, 5}, {2, 3, 4}, {4, 5, 6}});
    CHECK(icc_3k(m).icc == doctest::Approx(1.0));
}

TEST_CASE("degrees of freedom for the 63 x 9 panel") {
    Rng rng(2);
    RatingMatrix m(63, 9);
    for (std::size_t i = 0; i < 63; ++i) {
        const double base = 1 + static_cast<double>(rng.below(5));
        for (std::size_t j = 0; j < 9; ++j) m(i, j) = std::clamp(base + (rng.below(3) - 1.0), 1.0, 5.0);
    }
    const auto r = icc_3k(m);
    CHECK(r.df1 == 62);
    CHECK(r.df2 == 496);
    CHECK(r.rater_df1 == 8);
    CHECK(r.icc > 0.8);
    CHECK(r.icc <= 1.0);
}

TEST_CASE("ICC against a residual-route recomputation on random matrices") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(10), k = 2 + rng.below(6);
        RatingMatrix m(n, k);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < k; ++j) m(i, j) = 1 + static_cast<double>(rng.below(5));
        std::vector<double> rmean(n, 0.0), cmean(k, 0.0);
        double g = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                rmean[i] += m(i, j) / k;
                cmean[j] += m(i, j) / n;
                g += m(i, j) / (n * k);
            }
        double ssr = 0, sse = 0;
        for (std::size_t i = 0; i < n; ++i) ssr += k * (rmean[i] - g) * (rmean[i] - g);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < k; ++j) {
                const double e = m(i, j) - rmean[i] - cmean[j] + g;
                sse += e * e;
            }
        const double msr = ssr / (n - 1), mse = sse / ((n - 1) * (k - 1));
        if (msr < 1e-12 || mse < 1e-12) continue;
        const auto r = icc_3k(m);
        CHECK(r.icc == doctest::Approx((msr - mse) / msr).epsilon(1e-9));
        CHECK(r.f == doctest::Approx(msr / mse).epsilon(1e-9));
        CHECK(r.p == doctest::Approx(boost_tail(msr / mse, double(n - 1), double((n - 1) * (k - 1)))).epsilon(1e-9));
    }
}

TEST_CASE("F tail matches the reference distribution") {
    for (double d1 : {1.0, 3.0, 8.0, 62.0})
        for (double d2 : {2.0, 6.0, 60.0, 496.0})
            for (double f : {0.01, 0.5, 1.0, 2.5, 10.0, 80.0}) {
                const double want = boost_tail(f, d1, d2);
                CHECK(f_upper_tail(f, d1, d2) == doctest::Approx(want).epsilon(1e-9).scale(1e-300));
            }
    CHECK(f_upper_tail(0.0, 3, 6) == 1.0);
}

TEST_CASE("incomplete beta edges") {
    CHECK(incomplete_beta(2, 3, 0.0) == 0.0);
    CHECK(incomplete_beta(2, 3, 1.0) == 1.0);
    CHECK(incomplete_beta(1, 1, 0.3) == doctest::Approx(0.3));
    // I_x(a, b) + I_{1-x}(b, a) = 1
    CHECK(incomplete_beta(2.5, 4, 0.2) + incomplete_beta(4, 2.5, 0.8) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("degenerate matrices") {
    CHECK_THROWS_AS(icc_3k(RatingMatrix::from_rows({{1, 2, 3}})), ValidationError);
    CHECK_THROWS_AS(icc_3k(RatingMatrix::from_rows({{1}, {2}})), ValidationError);
    CHECK_THROWS_AS(icc_3k(RatingMatrix::from_rows({{1, 2}, {2, 1}, {3, 0}})), DomainError);
    CHECK_THROWS(RatingMatrix::from_rows({{1, 2}, {3}}));
}

TEST_CASE("ratings CSV") {
    const auto m = parse_ratings_csv("subject,a,b,c\ns1,1,2,3\ns2,4,5,5\n");
    CHECK(m.subjects() == 2);
    CHECK(m.raters() == 3);
    CHECK(m(1, 2) == 5.0);
    CHECK(m.rater_ids[1] == "b");
    CHECK(m.subject_ids[0] == "s1");
    CHECK_THROWS_AS(parse_ratings_csv("subject,a\ns1,9\ns2,1\n"), Error);
    CHECK_THROWS_AS(parse_ratings_csv("subject,a,b\ns1,1\n"), Error);
    CHECK_THROWS_AS(parse_ratings_csv("subject,a,b\ns1,1,x\n"), Error);
    CHECK_THROWS_AS(parse_ratings_csv(""), Error);
}
