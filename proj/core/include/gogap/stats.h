#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>

namespace gogap {

enum class Tail { one_sided_less, one_sided_greater, two_sided };

std::string to_string(Tail tail);

// Outcome of one hypothesis test. Degenerate inputs (for example two
// zero-variance samples) produce a flagged report instead of throwing, so
// batch pipelines survive pathological matches.
struct TestReport {
  std::string test_name;
  double statistic = 0.0;
  std::optional<double> df;                            // scalar df
  std::optional<std::pair<double, double>> df_pair;    // (df1, df2)
  double p_value = 1.0;
  Tail tail = Tail::two_sided;
  std::optional<double> effect_size;
  std::pair<int, int> n{0, 0};
  bool degenerate = false;
  std::string note;
  // Secondary quantities: W and U for the rank-sum test, z scores, group
  // medians, and the like.
  std::map<std::string, double> extras;

  // JSON with fixed field names: test, statistic, df, p, tail,
  // effect_size, n1, n2 (plus degenerate/note/extras when present).
  std::string to_json() const;
};

struct SampleSummary {
  int n = 0;
  double mean = 0.0;
  double sd = 0.0;        // denominator n - 1; 0 when n == 1
  double variance = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;

  std::string to_json() const;
};

// Welch's unequal-variance t test of mean(x) - mean(y), df by
// Welch-Satterthwaite, Cohen's d with the pooled SD (denominator
// n_x + n_y - 2). one_sided_greater tests mean(x) > mean(y).
TestReport welch_t(std::span<const double> x, std::span<const double> y,
                   Tail tail);

// Wilcoxon rank-sum. statistic = W, the midrank sum of x in the pooled
// sample (U is reported alongside, so the convention is explicit either
// way). Exact enumeration when n_x + n_y <= 12; otherwise the normal
// approximation with tie-corrected variance and continuity correction.
// one_sided_greater tests x stochastically greater than y.
TestReport wilcoxon_rank_sum(std::span<const double> x,
                             std::span<const double> y, Tail tail);

// Two-sample Kolmogorov-Smirnov. two_sided uses D = sup |F_x - F_y| with
// the asymptotic Kolmogorov series at n_eff = n_x n_y / (n_x + n_y);
// one-sided tails use the signed supremum supporting the alternative
// (one_sided_greater: sup(F_y - F_x)) with p = exp(-2 n_eff D^2).
TestReport ks_two_sample(std::span<const double> x, std::span<const double> y,
                         Tail tail);

enum class LeveneCenter { mean, median };

// Levene's variance-equality test: one-way ANOVA F on absolute deviations
// from the group center, df = (1, n_x + n_y - 2). center = median is the
// Brown-Forsythe variant. one_sided_greater tests var(x) > var(y).
TestReport levene(std::span<const double> x, std::span<const double> y,
                  LeveneCenter center, Tail tail);

// Quartiles by linear interpolation of the empirical quantile function
// (the common statistical-package default).
SampleSummary summarize(std::span<const double> x);

double sample_mean(std::span<const double> x);
double sample_variance(std::span<const double> x);  // denominator n - 1
double quantile(std::span<const double> sorted_values, double p);

}  // namespace gogap
