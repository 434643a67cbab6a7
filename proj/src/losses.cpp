#include "protorecon/losses.hpp"

#include <cmath>
#include <stdexcept>

#include "protorecon/simd/kernels.hpp"

namespace protorecon {

Mask Mask::parse(std::string_view s) {
  if (s.size() != 3) throw std::invalid_argument("mask must have 3 characters: " + std::string(s));
  for (char ch : s) {
    if (ch != '0' && ch != '1') {
      throw std::invalid_argument("mask characters must be 0 or 1: " + std::string(s));
    }
  }
  return Mask{s[0] == '1', s[1] == '1', s[2] == '1'};
}

std::array<Mask, 8> Mask::all() noexcept {
  std::array<Mask, 8> out{};
  for (int i = 0; i < 8; ++i) out[i] = Mask{(i & 4) != 0, (i & 2) != 0, (i & 1) != 0};
  return out;
}

std::string Mask::str() const {
  return {overlap ? '1' : '0', coverage ? '1' : '0', separation ? '1' : '0'};
}

void LossConfig::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("loss config: tau must be positive");
  if (!(lambda_o >= 0.0 && lambda_c >= 0.0 && lambda_s >= 0.0)) {
    throw std::invalid_argument("loss config: lambdas must be nonnegative");
  }
}

std::size_t nearest_prototype(double x, std::span<const double> protos) {
  std::size_t best = 0;
  double best_d2 = INFINITY;
  for (std::size_t j = 0; j < protos.size(); ++j) {
    const double diff = x - protos[j];
    const double d2 = diff * diff;
    if (d2 < best_d2) {
      best_d2 = d2;
      best = j;
    }
  }
  return best;
}

double fit_loss(const Params& p, const Dataset& d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = forward(p, d.x[i]) - d.y[i];
    s += r * r;
  }
  return s / static_cast<double>(d.size());
}

double overlap_loss(const Params& p, const Dataset& d) {
  std::vector<double> act(p.width());
  double total = 0.0;
  for (double xi : d.x) {
    simd::gaussian_activations(xi, p.w, p.b, act);
    double row = 0.0;
    for (double s : act) row += s;
    // sum_{j<k} s_j s_k = 1/2 sum_j s_j (row - s_j); row >= s_j holds in
    // floating point because every summand is nonnegative.
    double pairs = 0.0;
    for (double s : act) pairs += s * (row - s);
    total += 0.5 * pairs;
  }
  return total;
}

double coverage_loss(std::span<const double> protos, std::span<const double> xs) {
  double total = 0.0;
  for (double xi : xs) {
    const double diff = xi - protos[nearest_prototype(xi, protos)];
    total += diff * diff;
  }
  return total;
}

double coverage_loss(const Params& p, const Dataset& d) {
  return coverage_loss(prototypes(p), d.x);
}

double separation_loss(std::span<const double> protos, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("separation_loss: tau must be positive");
  const std::size_t n = protos.size();
  std::vector<double> row(n);
  double total = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const auto rest = protos.subspan(j + 1);
    simd::gaussian_distance(protos[j], rest, 1.0 / tau, std::span<double>(row).first(rest.size()));
    for (std::size_t k = 0; k < rest.size(); ++k) total += row[k];
  }
  return total;
}

double separation_loss(const Params& p, double tau) { return separation_loss(prototypes(p), tau); }

namespace {

double masked_total(const LossBreakdown& l, const LossConfig& cfg) {
  double total = l.fit;
  if (cfg.mask.overlap) total += cfg.lambda_o * l.overlap;
  if (cfg.mask.coverage) total += cfg.lambda_c * l.coverage;
  if (cfg.mask.separation) total += cfg.lambda_s * l.separation;
  return total;
}

}  // namespace

LossBreakdown total_loss(const Params& p, const Dataset& d, const LossConfig& cfg) {
  cfg.validate();
  const auto protos = prototypes(p);
  LossBreakdown l;
  l.fit = fit_loss(p, d);
  l.overlap = overlap_loss(p, d);
  l.coverage = coverage_loss(protos, d.x);
  l.separation = separation_loss(protos, cfg.tau);
  l.total = masked_total(l, cfg);
  return l;
}

Gradient grad_total(const Params& p, const Dataset& d, const LossConfig& cfg) {
  return evaluate(p, d, cfg).grad;
}

Evaluation evaluate(const Params& p, const Dataset& d, const LossConfig& cfg) {
  cfg.validate();
  const std::size_t h = p.width();
  const std::size_t n = d.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto protos = prototypes(p);

  Evaluation ev{LossBreakdown{}, Gradient(h)};
  auto& g = ev.grad;
  std::vector<double> act(h);
  std::vector<double> dproto(h, 0.0);

  // Fit and overlap share the activation row of each input.
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = d.x[i];
    simd::gaussian_activations(xi, p.w, p.b, act);
    const double r = simd::dot(p.a, act) + p.c - d.y[i];
    double row = 0.0;
    for (double s : act) row += s;
    double pairs = 0.0;
    for (double s : act) pairs += s * (row - s);

    ev.loss.fit += r * r;
    ev.loss.overlap += 0.5 * pairs;

    const double fit_coef = 2.0 * inv_n * r;
    const double ovl_coef = cfg.mask.overlap ? cfg.lambda_o : 0.0;
    g.dc += fit_coef;
    for (std::size_t j = 0; j < h; ++j) {
      const double s = act[j];
      g.da[j] += fit_coef * s;
      const double ds = fit_coef * p.a[j] + ovl_coef * (row - s);
      const double z = p.w[j] * xi + p.b[j];
      const double dz = -2.0 * z * s * ds;
      g.dw[j] += dz * xi;
      g.db[j] += dz;
    }
  }
  ev.loss.fit *= inv_n;

  for (double xi : d.x) {
    const std::size_t j = nearest_prototype(xi, protos);
    const double diff = xi - protos[j];
    ev.loss.coverage += diff * diff;
    if (cfg.mask.coverage) dproto[j] += cfg.lambda_c * -2.0 * diff;
  }

  const double inv_tau = 1.0 / cfg.tau;
  std::vector<double> kern(h);
  for (std::size_t j = 0; j < h; ++j) {
    simd::gaussian_distance(protos[j], protos, inv_tau, kern);
    for (std::size_t k = j + 1; k < h; ++k) ev.loss.separation += kern[k];
    if (cfg.mask.separation) {
      double acc = 0.0;
      for (std::size_t k = 0; k < h; ++k) acc += kern[k] * (protos[j] - protos[k]);
      dproto[j] += cfg.lambda_s * -2.0 * inv_tau * acc;
    }
  }

  // x_hat = -b/w: d/dw = b/w^2, d/db = -1/w.
  for (std::size_t j = 0; j < h; ++j) {
    if (dproto[j] == 0.0) continue;
    g.dw[j] += dproto[j] * p.b[j] / (p.w[j] * p.w[j]);
    g.db[j] += dproto[j] * -1.0 / p.w[j];
  }

  ev.loss.total = masked_total(ev.loss, cfg);
  return ev;
}

}  // namespace protorecon
