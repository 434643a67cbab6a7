// Shapiro-Wilk W and its p-value following Royston (1995), Algorithm AS R94.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "protorecon/stats.hpp"

namespace protorecon::stats {

namespace {

// c[0] + c[1] x + ... + c[n-1] x^(n-1)
double poly(std::span<const double> c, double x) {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

constexpr double kG[] = {-2.273, 0.459};
constexpr double kC1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
constexpr double kC2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
constexpr double kC3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
constexpr double kC4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
constexpr double kC5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
constexpr double kC6[] = {-0.4803, -0.082676, 0.0030302};

// Half-vector of coefficients a[1..n/2] (index 0 unused), largest first.
std::vector<double> coefficients(std::size_t n) {
  const std::size_t half = n / 2;
  std::vector<double> a(half + 1, 0.0);
  if (n == 3) {
    a[1] = std::numbers::sqrt2 / 2.0;
    return a;
  }
  const boost::math::normal_distribution<double> unit;
  const double an = static_cast<double>(n);
  std::vector<double> m(half + 1, 0.0);
  double summ2 = 0.0;
  for (std::size_t i = 1; i <= half; ++i) {
    m[i] = boost::math::quantile(unit, (static_cast<double>(i) - 0.375) / (an + 0.25));
    summ2 += m[i] * m[i];
  }
  summ2 *= 2.0;
  const double ssumm2 = std::sqrt(summ2);
  const double rsn = 1.0 / std::sqrt(an);
  const double a1 = poly(kC1, rsn) - m[1] / ssumm2;

  std::size_t first_free;
  double fac;
  if (n > 5) {
    first_free = 3;
    const double a2 = -m[2] / ssumm2 + poly(kC2, rsn);
    fac = std::sqrt((summ2 - 2.0 * m[1] * m[1] - 2.0 * m[2] * m[2]) /
                    (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
    a[2] = a2;
  } else {
    first_free = 2;
    fac = std::sqrt((summ2 - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1));
  }
  a[1] = a1;
  for (std::size_t i = first_free; i <= half; ++i) a[i] = -m[i] / fac;
  return a;
}

}  // namespace

std::optional<ShapiroWilkResult> shapiro_wilk(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 3 || n > 5000) return std::nullopt;
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (!(range > 1e-19 * std::max(1.0, std::abs(x.front())))) return std::nullopt;

  const auto a = coefficients(n);
  const std::size_t half = n / 2;

  // W as the squared correlation between the ordered sample and the
  // antisymmetric coefficient vector.
  std::vector<double> coef(n, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    coef[i] = -a[i + 1];
    coef[n - 1 - i] = a[i + 1];
  }
  double ca = 0.0, cx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ca += coef[i];
    cx += x[i] / range;
  }
  ca /= static_cast<double>(n);
  cx /= static_cast<double>(n);
  double ssa = 0.0, ssx = 0.0, sax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = coef[i] - ca;
    const double dx = x[i] / range - cx;
    ssa += da * da;
    ssx += dx * dx;
    sax += da * dx;
  }
  const double ssassx = std::sqrt(ssa * ssx);
  const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);

  ShapiroWilkResult r;
  r.w = 1.0 - w1;

  if (n == 3) {
    constexpr double pi6 = 6.0 / std::numbers::pi;
    constexpr double stqr = std::numbers::pi / 3.0;
    r.p = std::max(0.0, pi6 * (std::asin(std::sqrt(r.w)) - stqr));
    return r;
  }

  const double an = static_cast<double>(n);
  double y = std::log(w1);
  double m, s;
  if (n <= 11) {
    const double gamma = poly(kG, an);
    if (y >= gamma) {
      r.p = 1e-99;
      return r;
    }
    y = -std::log(gamma - y);
    m = poly(kC3, an);
    s = std::exp(poly(kC4, an));
  } else {
    const double ln_n = std::log(an);
    m = poly(kC5, ln_n);
    s = std::exp(poly(kC6, ln_n));
  }
  if (std::isinf(y) && y < 0) {
    r.p = 1.0;
    return r;
  }
  const boost::math::normal_distribution<double> dist(m, s);
  r.p = boost::math::cdf(boost::math::complement(dist, y));
  return r;
}

}  // namespace protorecon::stats
