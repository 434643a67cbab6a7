#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "protorecon/stats.hpp"

namespace protorecon::stats {

namespace {

struct Ranking {
  std::vector<double> ranks;  // mid-ranks of the pooled sample, a first then b
  double tie_term = 0.0;      // sum over tie groups of t^3 - t
};

Ranking pooled_ranks(std::span<const double> a, std::span<const double> b) {
  const std::size_t total = a.size() + b.size();
  std::vector<double> pooled;
  pooled.reserve(total);
  pooled.insert(pooled.end(), a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });

  Ranking r;
  r.ranks.assign(total, 0.0);
  for (std::size_t lo = 0; lo < total;) {
    std::size_t hi = lo + 1;
    while (hi < total && pooled[order[hi]] == pooled[order[lo]]) ++hi;
    const double mid = 0.5 * static_cast<double>(lo + 1 + hi);
    for (std::size_t k = lo; k < hi; ++k) r.ranks[order[k]] = mid;
    const double t = static_cast<double>(hi - lo);
    r.tie_term += t * t * t - t;
    lo = hi;
  }
  return r;
}

// Exact two-sided p from the permutation distribution of group a's rank
// sum. Ranks are doubled so mid-ranks become integers; counts[k][s] is the
// number of k-subsets of the pooled items with doubled rank sum s.
double exact_p(const std::vector<double>& ranks, std::size_t na) {
  std::vector<int> doubled(ranks.size());
  int max_sum = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    doubled[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
    max_sum += doubled[i];
  }
  int observed = 0;
  for (std::size_t i = 0; i < na; ++i) observed += doubled[i];

  std::vector<std::vector<double>> counts(na + 1, std::vector<double>(max_sum + 1, 0.0));
  counts[0][0] = 1.0;
  for (int r : doubled) {
    for (std::size_t k = na; k >= 1; --k) {
      auto& dst = counts[k];
      const auto& src = counts[k - 1];
      for (int s = max_sum; s >= r; --s) dst[s] += src[s - r];
    }
  }
  const auto& dist = counts[na];
  double total = 0.0, lower = 0.0, upper = 0.0;
  for (int s = 0; s <= max_sum; ++s) {
    total += dist[s];
    if (s <= observed) lower += dist[s];
    if (s >= observed) upper += dist[s];
  }
  return std::min(1.0, 2.0 * std::min(lower, upper) / total);
}

}  // namespace

MannWhitneyResult mann_whitney(std::span<const double> a, std::span<const double> b) {
  MannWhitneyResult res;
  const std::size_t na = a.size(), nb = b.size();
  if (na == 0 || nb == 0) return res;
  const auto ranking = pooled_ranks(a, b);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < na; ++i) rank_sum += ranking.ranks[i];
  const double dna = static_cast<double>(na), dnb = static_cast<double>(nb);
  res.u = rank_sum - dna * (dna + 1.0) / 2.0;

  if (na <= kMannWhitneyExactLimit && nb <= kMannWhitneyExactLimit) {
    res.exact = true;
    res.p = exact_p(ranking.ranks, na);
    return res;
  }

  const double n = dna + dnb;
  const double mu = dna * dnb / 2.0;
  const double var = dna * dnb / 12.0 * ((n + 1.0) - ranking.tie_term / (n * (n - 1.0)));
  if (!(var > 0.0)) {
    res.p = 1.0;
    return res;
  }
  const double dev = std::abs(res.u - mu);
  const double z = std::max(0.0, dev - 0.5) / std::sqrt(var);
  const boost::math::normal_distribution<double> unit;
  res.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(unit, z)));
  return res;
}

}  // namespace protorecon::stats
