#include "gogap/stats.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <nlohmann/json.hpp>

#include "gogap/special_functions.h"

namespace gogap {

using nlohmann::json;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double clamp_p(double p) { return std::min(1.0, std::max(0.0, p)); }

json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

// Midranks of the pooled sample, returned per group.
struct PooledRanks {
  std::vector<double> rank_x;
  std::vector<double> rank_y;
  double tie_term = 0.0;  // sum over tie groups of (t^3 - t)
};

PooledRanks midranks(std::span<const double> x, std::span<const double> y) {
  struct Tagged {
    double value;
    bool from_x;
  };
  std::vector<Tagged> pooled;
  pooled.reserve(x.size() + y.size());
  for (double v : x) pooled.push_back({v, true});
  for (double v : y) pooled.push_back({v, false});
  std::stable_sort(pooled.begin(), pooled.end(),
                   [](const Tagged& a, const Tagged& b) {
                     return a.value < b.value;
                   });
  PooledRanks out;
  out.rank_x.resize(x.size());
  out.rank_y.resize(y.size());
  std::size_t xi = 0, yi = 0;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
    const double t = static_cast<double>(j - i);
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    out.tie_term += t * t * t - t;
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].from_x)
        out.rank_x[xi++] = rank;
      else
        out.rank_y[yi++] = rank;
    }
    i = j;
  }
  return out;
}

// Exact null distribution of the rank-sum statistic: dynamic program over
// doubled midranks (integers even with ties). Counts subsets of size m by
// achievable sum.
struct ExactWilcoxon {
  // counts[s] = number of size-m subsets of the doubled ranks with sum s
  std::vector<double> counts;
  double total = 0.0;
};

ExactWilcoxon exact_rank_sum_distribution(const std::vector<int>& doubled_ranks,
                                          int m) {
  int max_sum = 0;
  for (int r : doubled_ranks) max_sum += r;
  // dp[k][s]: subsets of size k summing to s
  std::vector<std::vector<double>> dp(
      m + 1, std::vector<double>(max_sum + 1, 0.0));
  dp[0][0] = 1.0;
  for (int r : doubled_ranks) {
    for (int k = m; k >= 1; --k)
      for (int s = max_sum; s >= r; --s)
        if (dp[k - 1][s - r] > 0.0) dp[k][s] += dp[k - 1][s - r];
  }
  ExactWilcoxon out;
  out.counts = std::move(dp[m]);
  for (double c : out.counts) out.total += c;
  return out;
}

}  // namespace

std::string to_string(Tail tail) {
  switch (tail) {
    case Tail::one_sided_less: return "one_sided_less";
    case Tail::one_sided_greater: return "one_sided_greater";
    case Tail::two_sided: return "two_sided";
  }
  return "unknown";
}

std::string TestReport::to_json() const {
  json j;
  j["test"] = test_name;
  j["statistic"] = finite_or_null(statistic);
  if (df_pair)
    j["df"] = {df_pair->first, df_pair->second};
  else if (df)
    j["df"] = *df;
  else
    j["df"] = nullptr;
  j["p"] = finite_or_null(p_value);
  j["tail"] = gogap::to_string(tail);
  j["effect_size"] = effect_size ? finite_or_null(*effect_size) : json(nullptr);
  j["n1"] = n.first;
  j["n2"] = n.second;
  if (degenerate) j["degenerate"] = true;
  if (!note.empty()) j["note"] = note;
  for (const auto& [k, v] : extras) j[k] = finite_or_null(v);
  return j.dump();
}

std::string SampleSummary::to_json() const {
  json j = {{"n", n},           {"mean", finite_or_null(mean)},
            {"sd", finite_or_null(sd)}, {"variance", finite_or_null(variance)},
            {"median", finite_or_null(median)}, {"q1", finite_or_null(q1)},
            {"q3", finite_or_null(q3)}};
  return j.dump();
}

double sample_mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean of empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = sample_mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

double quantile(std::span<const double> sorted_values, double p) {
  if (sorted_values.empty())
    throw std::invalid_argument("quantile of empty sample");
  if (p <= 0.0) return sorted_values.front();
  if (p >= 1.0) return sorted_values.back();
  const double h = p * static_cast<double>(sorted_values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted_values.size()) return sorted_values.back();
  return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

SampleSummary summarize(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("summarize: empty sample");
  SampleSummary s;
  s.n = static_cast<int>(x.size());
  s.mean = sample_mean(x);
  s.variance = sample_variance(x);
  s.sd = std::sqrt(s.variance);
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  s.q1 = quantile(sorted, 0.25);
  s.median = quantile(sorted, 0.5);
  s.q3 = quantile(sorted, 0.75);
  return s;
}

TestReport welch_t(std::span<const double> x, std::span<const double> y,
                   Tail tail) {
  if (x.size() < 2 || y.size() < 2)
    throw std::invalid_argument("welch_t: both samples need n >= 2");
  TestReport r;
  r.test_name = "welch_t";
  r.tail = tail;
  r.n = {static_cast<int>(x.size()), static_cast<int>(y.size())};

  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  const double mx = sample_mean(x), my = sample_mean(y);
  const double vx = sample_variance(x), vy = sample_variance(y);
  if (vx == 0.0 && vy == 0.0) {
    r.degenerate = true;
    r.statistic = kNan;
    r.p_value = kNan;
    r.note = "both samples have zero variance";
    return r;
  }
  const double se2 = vx / nx + vy / ny;
  const double t = (mx - my) / std::sqrt(se2);
  const double df = se2 * se2 /
                    (vx * vx / (nx * nx * (nx - 1.0)) +
                     vy * vy / (ny * ny * (ny - 1.0)));
  r.statistic = t;
  r.df = df;
  const double pooled_var =
      ((nx - 1.0) * vx + (ny - 1.0) * vy) / (nx + ny - 2.0);
  if (pooled_var > 0.0) r.effect_size = (mx - my) / std::sqrt(pooled_var);

  const double cdf = t_cdf(t, df);
  switch (tail) {
    case Tail::one_sided_less: r.p_value = cdf; break;
    case Tail::one_sided_greater: r.p_value = 1.0 - cdf; break;
    case Tail::two_sided: r.p_value = clamp_p(2.0 * std::min(cdf, 1.0 - cdf));
  }
  r.extras["mean_x"] = mx;
  r.extras["mean_y"] = my;
  return r;
}

TestReport wilcoxon_rank_sum(std::span<const double> x,
                             std::span<const double> y, Tail tail) {
  if (x.empty() || y.empty())
    throw std::invalid_argument("wilcoxon_rank_sum: empty sample");
  TestReport r;
  r.test_name = "wilcoxon_rank_sum";
  r.tail = tail;
  r.n = {static_cast<int>(x.size()), static_cast<int>(y.size())};

  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  const double n = nx + ny;
  PooledRanks ranks = midranks(x, y);
  double w = 0.0;
  for (double rank : ranks.rank_x) w += rank;
  r.statistic = w;
  r.extras["W"] = w;
  r.extras["U"] = w - nx * (nx + 1.0) / 2.0;

  if (x.size() + y.size() <= 12) {
    // Exact: enumerate the null distribution of the rank sum over all
    // C(n, n_x) assignments via the subset-sum recursion.
    std::vector<int> doubled;
    doubled.reserve(ranks.rank_x.size() + ranks.rank_y.size());
    for (double rank : ranks.rank_x)
      doubled.push_back(static_cast<int>(std::llround(2.0 * rank)));
    for (double rank : ranks.rank_y)
      doubled.push_back(static_cast<int>(std::llround(2.0 * rank)));
    ExactWilcoxon dist =
        exact_rank_sum_distribution(doubled, static_cast<int>(x.size()));
    const int w2 = static_cast<int>(std::llround(2.0 * w));
    double le = 0.0, ge = 0.0;
    for (int s = 0; s < static_cast<int>(dist.counts.size()); ++s) {
      if (dist.counts[s] == 0.0) continue;
      if (s <= w2) le += dist.counts[s];
      if (s >= w2) ge += dist.counts[s];
    }
    le /= dist.total;
    ge /= dist.total;
    switch (tail) {
      case Tail::one_sided_less: r.p_value = le; break;
      case Tail::one_sided_greater: r.p_value = ge; break;
      case Tail::two_sided: r.p_value = clamp_p(2.0 * std::min(le, ge));
    }
    r.note = "exact";
    return r;
  }

  const double mean_w = nx * (n + 1.0) / 2.0;
  double var_w = nx * ny / 12.0 *
                 ((n + 1.0) - ranks.tie_term / (n * (n - 1.0)));
  if (var_w <= 0.0) {
    // Everything tied: no evidence either way.
    r.extras["z"] = 0.0;
    r.p_value = tail == Tail::two_sided ? 1.0 : 0.5;
    r.note = "normal approximation, fully tied";
    return r;
  }
  const double sd_w = std::sqrt(var_w);
  auto z_cc = [&](double shift) { return (w - mean_w + shift) / sd_w; };
  switch (tail) {
    case Tail::one_sided_less:
      r.extras["z"] = z_cc(+0.5);
      r.p_value = normal_cdf(z_cc(+0.5));
      break;
    case Tail::one_sided_greater:
      r.extras["z"] = z_cc(-0.5);
      r.p_value = 1.0 - normal_cdf(z_cc(-0.5));
      break;
    case Tail::two_sided: {
      const double z = (std::fabs(w - mean_w) - 0.5) / sd_w;
      r.extras["z"] = z;
      r.p_value = clamp_p(2.0 * (1.0 - normal_cdf(std::max(0.0, z))));
    }
  }
  r.note = "normal approximation with tie correction";
  return r;
}

TestReport ks_two_sample(std::span<const double> x, std::span<const double> y,
                         Tail tail) {
  if (x.empty() || y.empty())
    throw std::invalid_argument("ks_two_sample: empty sample");
  TestReport r;
  r.test_name = "ks_two_sample";
  r.tail = tail;
  r.n = {static_cast<int>(x.size()), static_cast<int>(y.size())};

  std::vector<double> sx(x.begin(), x.end()), sy(y.begin(), y.end());
  std::sort(sx.begin(), sx.end());
  std::sort(sy.begin(), sy.end());
  const double nx = static_cast<double>(sx.size());
  const double ny = static_cast<double>(sy.size());

  double d_plus = 0.0, d_minus = 0.0;  // sup(Fx - Fy), sup(Fy - Fx)
  std::size_t i = 0, j = 0;
  while (i < sx.size() || j < sy.size()) {
    double v;
    if (j >= sy.size() || (i < sx.size() && sx[i] <= sy[j]))
      v = sx[i];
    else
      v = sy[j];
    while (i < sx.size() && sx[i] == v) ++i;
    while (j < sy.size() && sy[j] == v) ++j;
    const double fx = static_cast<double>(i) / nx;
    const double fy = static_cast<double>(j) / ny;
    d_plus = std::max(d_plus, fx - fy);
    d_minus = std::max(d_minus, fy - fx);
  }
  const double n_eff = nx * ny / (nx + ny);
  switch (tail) {
    case Tail::one_sided_less:
      r.statistic = d_plus;
      r.p_value = clamp_p(std::exp(-2.0 * n_eff * d_plus * d_plus));
      r.note = "one-sided exponential bound";
      break;
    case Tail::one_sided_greater:
      r.statistic = d_minus;
      r.p_value = clamp_p(std::exp(-2.0 * n_eff * d_minus * d_minus));
      r.note = "one-sided exponential bound";
      break;
    case Tail::two_sided: {
      const double d = std::max(d_plus, d_minus);
      r.statistic = d;
      r.p_value = clamp_p(kolmogorov_q(std::sqrt(n_eff) * d));
      r.note = "asymptotic Kolmogorov series";
    }
  }
  r.extras["d_plus"] = d_plus;
  r.extras["d_minus"] = d_minus;
  return r;
}

TestReport levene(std::span<const double> x, std::span<const double> y,
                  LeveneCenter center, Tail tail) {
  if (x.size() < 2 || y.size() < 2)
    throw std::invalid_argument("levene: both samples need n >= 2");
  TestReport r;
  r.test_name = center == LeveneCenter::mean ? "levene" : "brown_forsythe";
  r.tail = tail;
  r.n = {static_cast<int>(x.size()), static_cast<int>(y.size())};

  auto deviations = [center](std::span<const double> s) {
    double c;
    if (center == LeveneCenter::mean) {
      c = sample_mean(s);
    } else {
      std::vector<double> sorted(s.begin(), s.end());
      std::sort(sorted.begin(), sorted.end());
      c = quantile(sorted, 0.5);
    }
    std::vector<double> z(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) z[i] = std::fabs(s[i] - c);
    return z;
  };
  std::vector<double> zx = deviations(x), zy = deviations(y);

  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  const double n = nx + ny;
  const double mzx = sample_mean(zx), mzy = sample_mean(zy);
  const double mz = (nx * mzx + ny * mzy) / n;
  const double ss_between =
      nx * (mzx - mz) * (mzx - mz) + ny * (mzy - mz) * (mzy - mz);
  double ss_within = 0.0;
  for (double z : zx) ss_within += (z - mzx) * (z - mzx);
  for (double z : zy) ss_within += (z - mzy) * (z - mzy);

  r.df_pair = {1.0, n - 2.0};
  r.extras["mean_absdev_x"] = mzx;
  r.extras["mean_absdev_y"] = mzy;
  if (ss_within == 0.0 && ss_between == 0.0) {
    r.degenerate = true;
    r.statistic = kNan;
    r.p_value = kNan;
    r.note = "no deviation variance in either sample";
    return r;
  }
  const double f = ss_within == 0.0
                       ? std::numeric_limits<double>::infinity()
                       : (ss_between / 1.0) / (ss_within / (n - 2.0));
  r.statistic = f;
  const double p_two = ss_within == 0.0 ? 0.0 : 1.0 - f_cdf(f, 1.0, n - 2.0);
  switch (tail) {
    case Tail::two_sided: r.p_value = clamp_p(p_two); break;
    case Tail::one_sided_greater:
      r.p_value = clamp_p(mzx >= mzy ? p_two / 2.0 : 1.0 - p_two / 2.0);
      break;
    case Tail::one_sided_less:
      r.p_value = clamp_p(mzx <= mzy ? p_two / 2.0 : 1.0 - p_two / 2.0);
      break;
  }
  return r;
}

}  // namespace gogap
