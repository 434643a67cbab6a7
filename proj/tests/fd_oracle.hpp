// Central finite-difference gradient of the masked total loss.
#pragma once

#include <cmath>
#include <vector>

#include "protorecon/losses.hpp"

namespace testing {

struct FdComparison {
  double rel_error = 0.0;  // ||analytic - fd|| / max(||analytic||, ||fd||)
  double max_abs = 0.0;    // largest per-component absolute gap
};

inline protorecon::Gradient fd_gradient(const protorecon::Params& p, const protorecon::Dataset& d,
                                        const protorecon::LossConfig& cfg, double h = 1e-6) {
  using protorecon::total_loss;
  protorecon::Gradient g(p.width());
  auto central = [&](double& slot) {
    const double saved = slot;
    slot = saved + h;
    const double up = total_loss(p, d, cfg).total;
    slot = saved - h;
    const double down = total_loss(p, d, cfg).total;
    slot = saved;
    return (up - down) / (2.0 * h);
  };
  auto& q = const_cast<protorecon::Params&>(p);
  for (std::size_t j = 0; j < p.width(); ++j) {
    g.da[j] = central(q.a[j]);
    g.dw[j] = central(q.w[j]);
    g.db[j] = central(q.b[j]);
  }
  g.dc = central(q.c);
  return g;
}

inline FdComparison compare_gradients(const protorecon::Gradient& a, const protorecon::Gradient& f) {
  double diff2 = 0.0, a2 = 0.0, f2 = 0.0, max_abs = 0.0;
  auto acc = [&](double x, double y) {
    diff2 += (x - y) * (x - y);
    a2 += x * x;
    f2 += y * y;
    max_abs = std::max(max_abs, std::abs(x - y));
  };
  for (std::size_t j = 0; j < a.da.size(); ++j) {
    acc(a.da[j], f.da[j]);
    acc(a.dw[j], f.dw[j]);
    acc(a.db[j], f.db[j]);
  }
  acc(a.dc, f.dc);
  const double scale = std::sqrt(std::max(a2, f2));
  return {scale > 0.0 ? std::sqrt(diff2) / scale : std::sqrt(diff2), max_abs};
}

}  // namespace testing
