#pragma once

#include <cstddef>
#include <vector>

namespace qdw {

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(std::size_t n);

/// Shared 256-node rule.
const GaussLegendreRule& default_rule();

template <class F>
double integrate(const GaussLegendreRule& rule, F&& f, double lo, double hi) {
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * acc;
}

}  // namespace qdw
