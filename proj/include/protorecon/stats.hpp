#pragma once

// Normality test, two-sample tests with automatic routing, Holm correction,
// effect sizes and pairwise significance matrices. Functions that can be
// undefined for a sample (zero variance, too few points) return an empty
// optional; callers fall back accordingly.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace protorecon::stats {

double mean(std::span<const double> v);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_sd(std::span<const double> v);

struct ShapiroWilkResult {
  double w = 0.0;
  double p = 0.0;
};

/// Royston's AS R94 approximation; defined for 3 <= n <= 5000 with nonzero range.
std::optional<ShapiroWilkResult> shapiro_wilk(std::span<const double> sample);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 0.0;  // two-sided
};

/// Empty when either group has fewer than 2 values or both variances vanish.
std::optional<WelchResult> welch_t(std::span<const double> a, std::span<const double> b);

struct MannWhitneyResult {
  double u = 0.0;   // U statistic of group a (mid-ranks on ties)
  double p = 1.0;   // two-sided
  bool exact = false;
};

/// Largest group size at which the exact distribution is used.
inline constexpr std::size_t kMannWhitneyExactLimit = 10;

/// Two-sided test. When both groups have at most kMannWhitneyExactLimit
/// values, p comes from the exact permutation distribution of the rank sum
/// (mid-ranks on ties); otherwise from the tie-corrected normal
/// approximation with continuity correction.
MannWhitneyResult mann_whitney(std::span<const double> a, std::span<const double> b);

enum class TestKind { welch, mann_whitney };

struct Comparison {
  double p = 1.0;
  TestKind test = TestKind::mann_whitney;
};

/// Welch when both groups pass Shapiro-Wilk at `normality_alpha` (p above
/// it); Mann-Whitney otherwise, including when either normality test or
/// Welch itself is not applicable.
Comparison compare_groups(std::span<const double> a, std::span<const double> b,
                          double normality_alpha = 0.05);

/// Holm step-down adjusted p-values, returned in input order.
std::vector<double> holm_correct(std::span<const double> pvals);

/// (mean(a) - mean(b)) / pooled sd; empty if the pooled sd is zero or a
/// group has fewer than 2 values.
std::optional<double> cohen_d(std::span<const double> a, std::span<const double> b);

struct EffectSize {
  double delta_e = 0.0;            // mean(baseline) - mean(treatment)
  double rel_reduction_pct = 0.0;  // 100 * delta_e / mean(baseline)
  double cohen_d = 0.0;            // NaN when undefined
};

EffectSize effect_size(std::span<const double> baseline, std::span<const double> treatment);

enum class Verdict { self, significant, not_significant };

struct PairwiseMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<Verdict>> verdicts;
  std::vector<std::vector<double>> raw_p;       // NaN on the diagonal
  std::vector<std::vector<double>> adjusted_p;  // NaN on the diagonal
  std::vector<std::vector<TestKind>> tests;
  double alpha = 0.05;

  /// Plus/minus table: '+' significant, '-' not, '=' on the diagonal.
  std::string render() const;
};

/// Compares every unordered pair of groups with compare_groups and
/// Holm-corrects the raw p-values as one family.
PairwiseMatrix significance_matrix(const std::vector<std::string>& labels,
                                   const std::vector<std::vector<double>>& groups,
                                   double alpha = 0.05);

}  // namespace protorecon::stats
