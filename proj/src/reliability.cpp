#include "aura/reliability.hpp"

#include "aura/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace aura {

namespace {

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw DomainError("incomplete beta continued fraction did not converge");
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string{} : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("incomplete beta needs x in [0, 1]");
    if (x == 0.0 || x == 1.0) return x;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_upper_tail(double f, double df1, double df2) {
    if (!(df1 > 0.0) || !(df2 > 0.0)) throw DomainError("F distribution needs positive df");
    if (std::isinf(f)) return 0.0;
    if (!(f > 0.0)) return 1.0;
    return incomplete_beta(0.5 * df2, 0.5 * df1, df2 / (df2 + df1 * f));
}

RatingMatrix::RatingMatrix(std::size_t subjects, std::size_t raters)
    : n_(subjects), k_(raters), cells_(subjects * raters, 0.0) {}

RatingMatrix RatingMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t k = rows.empty() ? 0 : rows.front().size();
    RatingMatrix m(rows.size(), k);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != k) throw ValidationError("rating rows differ in length");
        for (std::size_t j = 0; j < k; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

RatingMatrix parse_ratings_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> raters;
    std::vector<std::string> subjects;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto cells = split_csv(line);
        if (raters.empty()) {
            if (cells.size() < 3) throw ParseError(line_no, "header needs a subject column and at least two raters");
            raters.assign(cells.begin() + 1, cells.end());
            continue;
        }
        if (cells.size() != raters.size() + 1)
            throw ParseError(line_no, "expected " + std::to_string(raters.size() + 1) + " cells");
        std::vector<double> row;
        for (std::size_t j = 1; j < cells.size(); ++j) {
            double v = 0.0;
            const auto& c = cells[j];
            auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc{} || ptr != c.data() + c.size() || c.empty())
                throw ParseError(line_no, "missing or non-numeric score for rater " + raters[j - 1]);
            if (!(v >= 1.0 && v <= 5.0))
                throw ValidationError("line " + std::to_string(line_no) + ": score outside 1-5");
            row.push_back(v);
        }
        subjects.push_back(cells[0]);
        rows.push_back(std::move(row));
    }
    if (raters.empty()) throw ParseError(line_no + 1, "missing header row");
    RatingMatrix m = RatingMatrix::from_rows(rows);
    if (rows.empty()) m = RatingMatrix(0, raters.size());
    m.rater_ids = std::move(raters);
    m.subject_ids = std::move(subjects);
    return m;
}

RatingMatrix load_ratings_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open ratings file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_ratings_csv(ss.str());
}

IccResult icc_3k(const RatingMatrix& m) {
    const std::size_t n = m.subjects(), k = m.raters();
    if (n < 2 || k < 2) throw ValidationError("ICC(3,k) needs at least 2 subjects and 2 raters");

    std::vector<double> row_mean(n, 0.0), col_mean(k, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const double v = m(i, j);
            if (!std::isfinite(v)) throw ValidationError("rating matrix has a non-finite cell");
            row_mean[i] += v;
            col_mean[j] += v;
            grand += v;
        }
    }
    const auto dn = static_cast<double>(n), dk = static_cast<double>(k);
    for (auto& r : row_mean) r /= dk;
    for (auto& c : col_mean) c /= dn;
    grand /= dn * dk;

    double ss_total = 0.0, ss_rows = 0.0, ss_cols = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) ss_total += (m(i, j) - grand) * (m(i, j) - grand);
    }
    for (double r : row_mean) ss_rows += (r - grand) * (r - grand);
    for (double c : col_mean) ss_cols += (c - grand) * (c - grand);
    ss_rows *= dk;
    ss_cols *= dn;
    // Rounding can push an exact-zero residual slightly negative.
    const double ss_error = std::max(0.0, ss_total - ss_rows - ss_cols);

    IccResult r;
    r.df1 = static_cast<int>(n - 1);
    r.df2 = static_cast<int>((n - 1) * (k - 1));
    r.rater_df1 = static_cast<int>(k - 1);
    r.ms_subjects = ss_rows / r.df1;
    r.ms_raters = ss_cols / r.rater_df1;
    r.ms_error = ss_error / r.df2;

    // Treat a residual at rounding level relative to the total as exactly zero.
    const bool no_error = r.ms_error <= 64 * std::numeric_limits<double>::epsilon() * (ss_total / r.df2 + 1e-300);
    if (!(r.ms_subjects > 0.0)) throw DomainError("ICC(3,k) undefined: no between-subject variance");

    if (no_error) {
        r.ms_error = 0.0;
        r.icc = 1.0;
        r.f = std::numeric_limits<double>::infinity();
        r.p = 0.0;
        r.rater_f = r.ms_raters > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        r.rater_p = r.ms_raters > 0.0 ? 0.0 : 1.0;
        return r;
    }
    r.icc = (r.ms_subjects - r.ms_error) / r.ms_subjects;
    r.f = r.ms_subjects / r.ms_error;
    r.p = f_upper_tail(r.f, r.df1, r.df2);
    r.rater_f = r.ms_raters / r.ms_error;
    r.rater_p = f_upper_tail(r.rater_f, r.rater_df1, r.df2);
    return r;
}

}  // namespace aura
