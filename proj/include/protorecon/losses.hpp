#pragma once

// Fitting loss, the three structural losses (overlap, coverage, separation),
// the masked total objective, and its analytic gradient.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "protorecon/model.hpp"

namespace protorecon {

/// Ablation mask in overlap-coverage-separation order; "000" is fit only.
struct Mask {
  bool overlap = false;
  bool coverage = false;
  bool separation = false;

  /// Parses the canonical 3-character form, e.g. "010". Throws
  /// std::invalid_argument on anything else.
  static Mask parse(std::string_view s);
  /// All eight masks in binary order 000, 001, ..., 111.
  static std::array<Mask, 8> all() noexcept;

  std::string str() const;
  /// Binary value of str(), 0..7.
  int index() const noexcept { return (overlap ? 4 : 0) + (coverage ? 2 : 0) + (separation ? 1 : 0); }

  friend bool operator==(const Mask&, const Mask&) = default;
};

struct LossConfig {
  Mask mask;
  double lambda_o = 0.01;
  double lambda_c = 0.01;
  double lambda_s = 0.01;
  double tau = 0.01;

  /// Throws std::invalid_argument unless tau > 0 and every lambda >= 0.
  void validate() const;
};

struct LossBreakdown {
  double fit = 0.0;
  double overlap = 0.0;
  double coverage = 0.0;
  double separation = 0.0;
  double total = 0.0;
};

/// Partials of the masked total loss, shaped like Params.
struct Gradient {
  std::vector<double> da;
  std::vector<double> dw;
  std::vector<double> db;
  double dc = 0.0;

  explicit Gradient(std::size_t width = 0) : da(width, 0.0), dw(width, 0.0), db(width, 0.0) {}
};

struct Evaluation {
  LossBreakdown loss;
  Gradient grad;
};

double fit_loss(const Params& p, const Dataset& d);
double overlap_loss(const Params& p, const Dataset& d);
double coverage_loss(const Params& p, const Dataset& d);
double coverage_loss(std::span<const double> protos, std::span<const double> xs);
double separation_loss(const Params& p, double tau);
double separation_loss(std::span<const double> protos, double tau);

/// Index of the prototype nearest to x; ties resolve to the lowest index.
std::size_t nearest_prototype(double x, std::span<const double> protos);

/// All four components are always evaluated; the mask only shapes `total`.
LossBreakdown total_loss(const Params& p, const Dataset& d, const LossConfig& cfg);

/// Exact partials of total_loss. The coverage minimum routes its subgradient
/// to the lowest-index nearest prototype of each input.
Gradient grad_total(const Params& p, const Dataset& d, const LossConfig& cfg);

/// total_loss and grad_total from a single pass over the activations.
Evaluation evaluate(const Params& p, const Dataset& d, const LossConfig& cfg);

}  // namespace protorecon
