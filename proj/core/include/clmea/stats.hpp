#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace clmea {

/// Outcome of a paired comparison where lower values are better.
enum class Verdict {
    kBetter,     ///< '+', first sample significantly lower
    kWorse,      ///< '-', first sample significantly higher
    kComparable, ///< '≈'
};

std::string_view to_symbol(Verdict verdict);

struct WilcoxonResult {
    Verdict verdict = Verdict::kComparable;
    double p_value = 1.0;
    double w_plus = 0.0;       ///< rank sum of positive differences a - b
    std::size_t n = 0;         ///< non-zero differences used
    bool exact = false;        ///< exact null distribution rather than normal approximation
    bool insufficient = false; ///< fewer than 5 non-zero differences
};

/// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences are
/// dropped, tied magnitudes get average ranks. The null distribution is exact
/// for up to 25 differences and normal (tie-corrected, continuity-corrected)
/// beyond.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

/// Exact two-sided p-value of the signed-rank statistic for the given non-zero
/// differences, enumerating the null distribution by dynamic programming.
double wilcoxon_exact_p(std::span<const double> differences);

struct Descriptive {
    double mean = 0.0;
    double median = 0.0;
    double std = 0.0;  ///< sample standard deviation (n - 1); 0 for a single value
    std::size_t count = 0;
};

Descriptive describe(std::span<const double> values);

} // namespace clmea
