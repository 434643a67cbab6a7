// Independent oracles for the two-sample tests and Holm correction.
#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

namespace testing {

// U of group a with mid-ranks, counted pairwise (ties count one half).
inline double u_statistic(const std::vector<double>& a, const std::vector<double>& b) {
  double u = 0.0;
  for (double x : a)
    for (double y : b) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
  return u;
}

// Two-sided exact p by enumerating every split of the pooled sample.
inline double enumerate_mann_whitney(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t n = a.size(), total = pooled.size();
  const double u_obs = u_statistic(a, b);
  std::vector<bool> pick(total, false);
  std::fill(pick.begin(), pick.begin() + n, true);
  double count = 0, lower = 0, upper = 0;
  do {
    std::vector<double> ga, gb;
    for (std::size_t i = 0; i < total; ++i) (pick[i] ? ga : gb).push_back(pooled[i]);
    const double u = u_statistic(ga, gb);
    count += 1;
    lower += u <= u_obs + 1e-9;
    upper += u >= u_obs - 1e-9;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return std::min(1.0, 2.0 * std::min(lower, upper) / count);
}

inline std::vector<double> reference_holm(const std::vector<double>& p) {
  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return p[i] < p[j]; });
  std::vector<double> out(m);
  double running = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    running = std::max(running, std::min(1.0, static_cast<double>(m - k) * p[order[k]]));
    out[order[k]] = running;
  }
  return out;
}

}  // namespace testing
