#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "protorecon/stats.hpp"

namespace protorecon::stats {

double mean(std::span<const double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double e : v) ss += (e - m) * (e - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::optional<WelchResult> welch_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) return std::nullopt;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double va = std::pow(sample_sd(a), 2) / na;
  const double vb = std::pow(sample_sd(b), 2) / nb;
  const double se2 = va + vb;
  if (!(se2 > 0.0)) return std::nullopt;
  WelchResult r;
  r.t = (mean(a) - mean(b)) / std::sqrt(se2);
  r.df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  const boost::math::students_t_distribution<double> dist(r.df);
  r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))));
  return r;
}

Comparison compare_groups(std::span<const double> a, std::span<const double> b,
                          double normality_alpha) {
  const auto sa = shapiro_wilk(a);
  const auto sb = shapiro_wilk(b);
  if (sa && sb && sa->p > normality_alpha && sb->p > normality_alpha) {
    if (const auto w = welch_t(a, b)) return Comparison{w->p, TestKind::welch};
  }
  return Comparison{mann_whitney(a, b).p, TestKind::mann_whitney};
}

std::vector<double> holm_correct(std::span<const double> pvals) {
  const std::size_t m = pvals.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return pvals[i] < pvals[j]; });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (std::size_t rank = 0; rank < m; ++rank) {
    const double scaled = static_cast<double>(m - rank) * pvals[order[rank]];
    running = std::max(running, std::min(1.0, scaled));
    adjusted[order[rank]] = running;
  }
  return adjusted;
}

std::optional<double> cohen_d(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) return std::nullopt;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double pooled_var = ((na - 1.0) * std::pow(sample_sd(a), 2) +
                             (nb - 1.0) * std::pow(sample_sd(b), 2)) /
                            (na + nb - 2.0);
  if (!(pooled_var > 0.0)) return std::nullopt;
  return (mean(a) - mean(b)) / std::sqrt(pooled_var);
}

EffectSize effect_size(std::span<const double> baseline, std::span<const double> treatment) {
  EffectSize e;
  const double base = mean(baseline);
  e.delta_e = base - mean(treatment);
  e.rel_reduction_pct =
      base != 0.0 ? 100.0 * e.delta_e / base : std::numeric_limits<double>::quiet_NaN();
  e.cohen_d = cohen_d(baseline, treatment).value_or(
      e.delta_e == 0.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN());
  return e;
}

std::string PairwiseMatrix::render() const {
  std::size_t width = 1;
  for (const auto& l : labels) width = std::max(width, l.size());
  std::ostringstream os;
  os << std::string(width, ' ');
  for (const auto& l : labels) os << ' ' << std::string(width - l.size(), ' ') << l;
  os << '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) {
    os << labels[i] << std::string(width - labels[i].size(), ' ');
    for (std::size_t j = 0; j < labels.size(); ++j) {
      char sym = '=';
      if (verdicts[i][j] == Verdict::significant) sym = '+';
      if (verdicts[i][j] == Verdict::not_significant) sym = '-';
      os << ' ' << std::string(width - 1, ' ') << sym;
    }
    os << '\n';
  }
  return os.str();
}

PairwiseMatrix significance_matrix(const std::vector<std::string>& labels,
                                   const std::vector<std::vector<double>>& groups,
                                   double alpha) {
  const std::size_t k = groups.size();
  if (labels.size() != k) throw std::invalid_argument("significance_matrix: label count mismatch");
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  PairwiseMatrix mat;
  mat.labels = labels;
  mat.alpha = alpha;
  mat.verdicts.assign(k, std::vector<Verdict>(k, Verdict::self));
  mat.raw_p.assign(k, std::vector<double>(k, nan));
  mat.adjusted_p.assign(k, std::vector<double>(k, nan));
  mat.tests.assign(k, std::vector<TestKind>(k, TestKind::mann_whitney));

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<double> raw;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const auto cmp = compare_groups(groups[i], groups[j]);
      pairs.emplace_back(i, j);
      raw.push_back(cmp.p);
      mat.tests[i][j] = mat.tests[j][i] = cmp.test;
    }
  }
  const auto adjusted = holm_correct(raw);
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto [i, j] = pairs[idx];
    const Verdict v = adjusted[idx] < alpha ? Verdict::significant : Verdict::not_significant;
    mat.verdicts[i][j] = mat.verdicts[j][i] = v;
    mat.raw_p[i][j] = mat.raw_p[j][i] = raw[idx];
    mat.adjusted_p[i][j] = mat.adjusted_p[j][i] = adjusted[idx];
  }
  return mat;
}

}  // namespace protorecon::stats
