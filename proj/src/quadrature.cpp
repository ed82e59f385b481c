#include "qdw/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qdw {

GaussLegendreRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: need at least one node");
  GaussLegendreRule rule{std::vector<double>(n), std::vector<double>(n)};
  const double nd = static_cast<double>(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Newton on P_n from the Tricomi-style initial guess
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = ((2.0 * jd - 1.0) * z * p2 - (jd - 1.0) * p3) / jd;
      }
      dp = nd * (z * p1 - p2) / (z * z - 1.0);
      const double z_prev = z;
      z = z_prev - p1 / dp;
      if (std::abs(z - z_prev) <= 1e-15) break;
    }
    // recompute the derivative at the converged root
    double p1 = 1.0, p2 = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      const double p3 = p2;
      p2 = p1;
      const double jd = static_cast<double>(j);
      p1 = ((2.0 * jd - 1.0) * z * p2 - (jd - 1.0) * p3) / jd;
    }
    dp = nd * (z * p1 - p2) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const GaussLegendreRule& default_rule() {
  static const GaussLegendreRule rule = gauss_legendre(256);
  return rule;
}

}  // namespace qdw
