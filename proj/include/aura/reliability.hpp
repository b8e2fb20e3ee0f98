#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace aura {

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// P(F > f) for an F(df1, df2) variate.
double f_upper_tail(double f, double df1, double df2);

// Complete subjects x raters score grid.
class RatingMatrix {
public:
    RatingMatrix(std::size_t subjects, std::size_t raters);
    // Rows are subjects; every row must have the same length.
    static RatingMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t subjects() const noexcept { return n_; }
    std::size_t raters() const noexcept { return k_; }
    double& operator()(std::size_t i, std::size_t j) { return cells_[i * k_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return cells_[i * k_ + j]; }

    std::vector<std::string> subject_ids;
    std::vector<std::string> rater_ids;

private:
    std::size_t n_;
    std::size_t k_;
    std::vector<double> cells_;
};

// CSV: header "subject,<rater>,...", then one row per subject with scores
// on the 1-5 scale. Throws ParseError / ValidationError.
RatingMatrix parse_ratings_csv(std::string_view text);
RatingMatrix load_ratings_csv(const std::string& path);

// Two-way mixed, consistency, average-measures ICC(3,k) with its F test.
struct IccResult {
    double icc = 0.0;
    double f = 0.0;   // MS_subjects / MS_error
    int df1 = 0;      // n - 1
    int df2 = 0;      // (n - 1)(k - 1)
    double p = 0.0;   // upper tail of F(df1, df2); 0 when MS_error == 0
    double ms_subjects = 0.0;
    double ms_raters = 0.0;
    double ms_error = 0.0;
    // Rater-effect test MS_raters / MS_error on (k - 1, df2), kept alongside
    // because some tables quote df1 = k - 1.
    double rater_f = 0.0;
    int rater_df1 = 0;
    double rater_p = 0.0;
};

// Throws ValidationError for n < 2 or k < 2, DomainError when every subject
// mean is equal (the coefficient is 0/0).
IccResult icc_3k(const RatingMatrix& m);

}  // namespace aura
