#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "protorecon/stats.hpp"
#include "stats_fixtures.hpp"
#include "stats_oracles.hpp"

using namespace protorecon;
using namespace protorecon::stats;
using testing::enumerate_mann_whitney;
using testing::reference_holm;
using testing::u_statistic;

TEST_CASE("mean and sample sd") {
  const std::vector<double> v{1, 2, 3, 4};
  CHECK(mean(v) == 2.5);
  CHECK(sample_sd(v) == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
}

TEST_CASE("Shapiro-Wilk matches frozen reference values") {
  for (const auto& c : fixtures::kShapiro) {
    CAPTURE(c.name);
    const auto r = shapiro_wilk(c.x);
    REQUIRE(r.has_value());
    CHECK(std::abs(r->w - c.w) < 1e-3);
    CHECK(std::abs(r->p - c.p) < 1e-2);
    // tighter than the contract, to catch regressions in the coefficients
    CHECK(std::abs(r->w - c.w) < 1e-6);
    CHECK(std::abs(r->p - c.p) < 1e-4);
  }
}

TEST_CASE("Shapiro-Wilk rejects bimodal data and refuses degenerate input") {
  const auto& bimodal = fixtures::kShapiro[6];
  REQUIRE(std::string(bimodal.name) == "bimodal10");
  CHECK(shapiro_wilk(bimodal.x)->p < 0.05);
  CHECK_FALSE(shapiro_wilk(std::vector<double>(10, 0.3)).has_value());
  CHECK_FALSE(shapiro_wilk(std::vector<double>{1.0, 2.0}).has_value());
  CHECK(shapiro_wilk(std::vector<double>{1.0, 2.0, 4.0}).has_value());
}

TEST_CASE("Welch t matches frozen reference values") {
  for (const auto& c : fixtures::kWelch) {
    const auto r = welch_t(c.a, c.b);
    REQUIRE(r.has_value());
    CHECK(r->t == doctest::Approx(c.t).epsilon(1e-10));
    CHECK(r->df == doctest::Approx(c.df).epsilon(1e-10));
    CHECK(std::abs(r->p - c.p) < 1e-6);
    CHECK(r->p == doctest::Approx(c.p).epsilon(1e-8));
  }
}

TEST_CASE("Welch t edge cases") {
  const std::vector<double> a{0.1, 0.5, 0.2, 0.9};
  const auto same = welch_t(a, a);
  REQUIRE(same.has_value());
  CHECK(same->t == 0.0);
  CHECK(same->p == doctest::Approx(1.0).epsilon(1e-14));

  std::mt19937_64 g(5);
  std::normal_distribution<double> n0(0.0, 1.0), n10(10.0, 1.0);
  std::vector<double> x(10), y(10);
  for (auto& v : x) v = n0(g);
  for (auto& v : y) v = n10(g);
  CHECK(welch_t(x, y)->p < 1e-6);

  CHECK_FALSE(welch_t(std::vector<double>{1, 1, 1}, std::vector<double>{2, 2, 2}).has_value());
  CHECK_FALSE(welch_t(std::vector<double>{1}, std::vector<double>{2, 3}).has_value());
}

TEST_CASE("Mann-Whitney exact branch equals full enumeration") {
  std::mt19937_64 g(77);
  for (std::size_t n = 1; n <= 7; ++n) {
    for (std::size_t m = 1; m <= 7; ++m) {
      for (int t = 0; t < (n == m ? 6 : 2); ++t) {
        std::uniform_int_distribution<int> coarse(0, 4);  // ties on some trials
        std::normal_distribution<double> fine(0.0, 1.0);
        std::vector<double> a(n), b(m);
        for (auto& v : a) v = t % 2 ? coarse(g) : fine(g);
        for (auto& v : b) v = t % 2 ? coarse(g) + 0.5 * (t % 3) : fine(g) + 0.7;
        const auto r = mann_whitney(a, b);
        CAPTURE(n);
        CAPTURE(m);
        CHECK(r.exact);
        CHECK(r.u == u_statistic(a, b));
        CHECK(r.p == doctest::Approx(enumerate_mann_whitney(a, b)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("Mann-Whitney closed-form cases") {
  const std::vector<double> lo{1, 2, 3, 4, 5}, hi{6, 7, 8, 9, 10};
  const auto r = mann_whitney(lo, hi);
  CHECK(r.exact);
  CHECK(r.u == 0.0);
  CHECK(r.p == doctest::Approx(2.0 / 252.0).epsilon(1e-12));

  const std::vector<double> a{1, 3, 5, 7, 9}, b{2, 4, 6, 8, 10};
  CHECK(mann_whitney(a, b).p > 0.6);
  const std::vector<double> same{4, 4, 4};
  CHECK(mann_whitney(same, same).p == 1.0);
}

TEST_CASE("Mann-Whitney at n=m=10 matches enumeration and the reference") {
  for (const auto& c : fixtures::kMannWhitneyExact) {
    const auto r = mann_whitney(c.a, c.b);
    CHECK(r.exact);
    CHECK(r.u == c.u);
    CHECK(r.p == doctest::Approx(c.p).epsilon(1e-12));
  }
  const auto& c = fixtures::kMannWhitneyExact.front();
  REQUIRE(c.a.size() == 10);
  CHECK(mann_whitney(c.a, c.b).p == doctest::Approx(enumerate_mann_whitney(c.a, c.b)).epsilon(1e-12));
}

TEST_CASE("Mann-Whitney normal approximation matches the reference") {
  for (const auto& c : fixtures::kMannWhitneyAsymptotic) {
    const auto r = mann_whitney(c.a, c.b);
    CHECK_FALSE(r.exact);
    CHECK(r.u == c.u);
    CHECK(r.p == doctest::Approx(c.p).epsilon(1e-9));
  }
}

TEST_CASE("compare_groups routing") {
  const auto& normal = fixtures::kShapiro[0].x;
  std::vector<double> shifted = normal;
  for (auto& v : shifted) v += 0.01;
  auto c = compare_groups(normal, shifted);
  CHECK(c.test == TestKind::welch);
  CHECK(c.p == doctest::Approx(welch_t(normal, shifted)->p).epsilon(1e-15));

  c = compare_groups(normal, fixtures::kShapiro[6].x);
  CHECK(c.test == TestKind::mann_whitney);
  CHECK(c.p == mann_whitney(normal, fixtures::kShapiro[6].x).p);

  c = compare_groups(normal, std::vector<double>(10, 0.7));
  CHECK(c.test == TestKind::mann_whitney);

  // pure function of the samples
  const auto again = compare_groups(normal, fixtures::kShapiro[6].x);
  CHECK(again.p == compare_groups(normal, fixtures::kShapiro[6].x).p);
}

TEST_CASE("Holm examples") {
  CHECK(holm_correct(std::vector<double>{0.03}) == std::vector<double>{0.03});
  const auto h = holm_correct(std::vector<double>{0.01, 0.04});
  CHECK(h[0] == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(h[1] == doctest::Approx(0.04).epsilon(1e-15));
  CHECK(holm_correct(std::vector<double>{}).empty());
  CHECK(holm_correct(std::vector<double>{0.5, 0.6, 0.7}) == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("Holm properties over random vectors") {
  std::mt19937_64 g(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t m = 1 + g() % 30;
    std::vector<double> p(m);
    for (auto& v : p) v = t % 4 == 0 ? std::round(u(g) * 20) / 400 : std::pow(u(g), 3);
    const auto adj = holm_correct(p);
    const auto ref = reference_holm(p);
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto i, auto j) { return p[i] < p[j]; });
    std::size_t holm_rej = 0, bonf_rej = 0;
    for (std::size_t i = 0; i < m; ++i) {
      REQUIRE(adj[i] >= p[i]);
      REQUIRE(adj[i] <= 1.0);
      REQUIRE(adj[i] <= std::min(1.0, m * p[i]) + 1e-15);
      REQUIRE(adj[i] == doctest::Approx(ref[i]).epsilon(1e-14));
      holm_rej += adj[i] < 0.05;
      bonf_rej += m * p[i] < 0.05;
    }
    for (std::size_t k = 1; k < m; ++k) REQUIRE(adj[order[k]] >= adj[order[k - 1]]);
    REQUIRE(holm_rej >= bonf_rej);

    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), g);
    std::vector<double> q(m);
    for (std::size_t i = 0; i < m; ++i) q[i] = p[perm[i]];
    const auto adj_q = holm_correct(q);
    for (std::size_t i = 0; i < m; ++i) REQUIRE(adj_q[i] == adj[perm[i]]);
  }
}

TEST_CASE("Cohen's d") {
  const std::vector<double> a{0, 1, 2}, b{-1, 0, 1};
  CHECK(*cohen_d(a, b) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(*cohen_d(b, a) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(*cohen_d(a, a) == 0.0);
  CHECK_FALSE(cohen_d(std::vector<double>{1, 1}, std::vector<double>{2, 2}).has_value());
  CHECK_FALSE(cohen_d(std::vector<double>{1}, std::vector<double>{2, 3}).has_value());
}

TEST_CASE("effect size") {
  const std::vector<double> base{0.70, 0.74, 0.78}, treat{0.624, 0.664, 0.704};
  const auto e = effect_size(base, treat);
  CHECK(e.delta_e == doctest::Approx(0.076).epsilon(1e-12));
  CHECK(e.rel_reduction_pct == doctest::Approx(100 * 0.076 / 0.74).epsilon(1e-12));
  CHECK(e.rel_reduction_pct == doctest::Approx(10.3).epsilon(0.01));
  CHECK(e.cohen_d == doctest::Approx(1.9).epsilon(1e-12));
  CHECK(effect_size(treat, base).cohen_d == doctest::Approx(-1.9).epsilon(1e-12));
  const auto flat = effect_size(std::vector<double>{1, 1}, std::vector<double>{1, 1});
  CHECK(flat.delta_e == 0.0);
  CHECK(flat.cohen_d == 0.0);
  CHECK(std::isnan(effect_size(std::vector<double>{1, 1}, std::vector<double>{2, 2}).cohen_d));
}

TEST_CASE("significance matrix") {
  const std::vector<std::string> labels{"000", "001", "010", "011", "100", "101", "110", "111"};
  std::mt19937_64 g(9);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> base(10);
  for (auto& v : base) v = noise(g);

  const std::vector<std::vector<double>> same(8, base);
  const auto flat = significance_matrix(labels, same);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      CHECK(flat.verdicts[i][j] == (i == j ? Verdict::self : Verdict::not_significant));

  std::vector<std::vector<double>> groups(8);
  for (auto& grp : groups) {
    grp.resize(10);
    for (auto& v : grp) v = noise(g);
  }
  for (auto& v : groups[3]) v += 100.0;
  const auto m = significance_matrix(labels, groups);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(m.verdicts[i][i] == Verdict::self);
    CHECK(std::isnan(m.raw_p[i][i]));
    for (std::size_t j = 0; j < 8; ++j) {
      CHECK(m.verdicts[i][j] == m.verdicts[j][i]);
      if (i != j) CHECK(m.adjusted_p[i][j] == m.adjusted_p[j][i]);
    }
    if (i != 3) CHECK(m.verdicts[3][i] == Verdict::significant);
  }
  // One Holm family of 28 raw p-values.
  std::vector<double> raw;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j) raw.push_back(m.raw_p[i][j]);
  const auto adj = holm_correct(raw);
  std::size_t k = 0;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j) CHECK(m.adjusted_p[i][j] == adj[k++]);

  const auto text = m.render();
  CHECK(text.find("=") != std::string::npos);
  CHECK_THROWS_AS(significance_matrix({"a"}, groups), std::invalid_argument);
}
