#include "clmea/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "clmea/errors.hpp"

namespace clmea {
namespace {

constexpr std::size_t kMinimumPairs = 5;
constexpr std::size_t kExactLimit = 25;

// Average ranks of |d|, doubled so that tied ranks stay integral.
std::vector<std::int64_t> doubled_ranks(std::span<const double> differences) {
    const std::size_t n = differences.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(differences[a]) < std::abs(differences[b]);
    });
    std::vector<std::int64_t> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && std::abs(differences[order[j + 1]]) == std::abs(differences[order[i]])) {
            ++j;
        }
        // Positions i..j hold ranks i+1..j+1; their doubled average is i + j + 2.
        const auto doubled = static_cast<std::int64_t>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = doubled;
        }
        i = j + 1;
    }
    return ranks;
}

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

} // namespace

std::string_view to_symbol(Verdict verdict) {
    switch (verdict) {
    case Verdict::kBetter:
        return "+";
    case Verdict::kWorse:
        return "-";
    case Verdict::kComparable:
        return "≈";
    }
    return "≈";
}

double wilcoxon_exact_p(std::span<const double> differences) {
    const auto ranks = doubled_ranks(differences);
    const std::int64_t total = std::accumulate(ranks.begin(), ranks.end(), std::int64_t{0});
    std::int64_t observed = 0;
    for (std::size_t i = 0; i < differences.size(); ++i) {
        if (differences[i] > 0.0) {
            observed += ranks[i];
        }
    }
    // counts[s] = number of sign assignments whose positive doubled-rank sum is s.
    std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
    counts[0] = 1.0;
    std::int64_t reach = 0;
    for (const std::int64_t r : ranks) {
        for (std::int64_t s = reach; s >= 0; --s) {
            counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
        }
        reach += r;
    }
    const double assignments = std::ldexp(1.0, static_cast<int>(differences.size()));
    double lower = 0.0;
    double upper = 0.0;
    for (std::int64_t s = 0; s <= total; ++s) {
        if (s <= observed) {
            lower += counts[static_cast<std::size_t>(s)];
        }
        if (s >= observed) {
            upper += counts[static_cast<std::size_t>(s)];
        }
    }
    return std::min(1.0, 2.0 * std::min(lower, upper) / assignments);
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b, double alpha) {
    require(a.size() == b.size(), "wilcoxon_signed_rank: samples must be paired");
    std::vector<double> d;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        if (diff != 0.0) {
            d.push_back(diff);
        }
    }
    WilcoxonResult result;
    result.n = d.size();
    const auto ranks = doubled_ranks(d);
    std::int64_t plus = 0;
    std::int64_t total = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        total += ranks[i];
        if (d[i] > 0.0) {
            plus += ranks[i];
        }
    }
    result.w_plus = static_cast<double>(plus) / 2.0;
    if (d.size() < kMinimumPairs) {
        result.insufficient = true;
        return result;
    }

    if (d.size() <= kExactLimit) {
        result.exact = true;
        result.p_value = wilcoxon_exact_p(d);
    } else {
        const double n = static_cast<double>(d.size());
        double tie_term = 0.0;
        std::vector<std::int64_t> sorted = ranks;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < sorted.size();) {
            std::size_t j = i;
            while (j < sorted.size() && sorted[j] == sorted[i]) {
                ++j;
            }
            const double t = static_cast<double>(j - i);
            tie_term += t * t * t - t;
            i = j;
        }
        const double mean = n * (n + 1.0) / 4.0;
        const double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
        const double offset = result.w_plus - mean;
        const double corrected = offset == 0.0 ? 0.0 : offset - std::copysign(0.5, offset);
        const double z = variance > 0.0 ? corrected / std::sqrt(variance) : 0.0;
        result.p_value = std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
    }

    if (result.p_value < alpha) {
        const double med = median_of(d);
        const bool a_lower = med != 0.0 ? med < 0.0 : 2 * plus < total;
        result.verdict = a_lower ? Verdict::kBetter : Verdict::kWorse;
    }
    return result;
}

Descriptive describe(std::span<const double> values) {
    Descriptive out;
    out.count = values.size();
    if (values.empty()) {
        return out;
    }
    const double n = static_cast<double>(values.size());
    out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    out.median = median_of({values.begin(), values.end()});
    if (values.size() > 1) {
        double ss = 0.0;
        for (const double v : values) {
            ss += (v - out.mean) * (v - out.mean);
        }
        out.std = std::sqrt(ss / (n - 1.0));
    }
    return out;
}

} // namespace clmea
