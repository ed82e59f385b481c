#include "qdw/limit_law.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "qdw/csv.hpp"
#include "qdw/quadrature.hpp"

namespace qdw {

namespace {

using std::numbers::pi;

// f(x) dx expressed in phi, where x = a sin(phi).
double phi_weight(double phi, const LimitLaw& law) {
  const double s = std::sin(phi);
  const double a2 = law.a * law.a;
  return std::sqrt(1.0 - a2) / (pi * (1.0 - a2 * s * s)) * (1.0 - law.m * law.a * s);
}

double cdf_phi(double phi, const LimitLaw& law) {
  if (phi <= -pi / 2) return 0.0;
  return integrate(default_rule(), [&](double p) { return phi_weight(p, law); }, -pi / 2, phi);
}

}  // namespace

void validate(const LimitLaw& law) {
  if (!(law.a > 0.0 && law.a < 1.0)) throw std::invalid_argument("limit law: a must lie in (0, 1)");
  // 1 - m x stays nonnegative on (-a, a) iff |m| <= 1/a
  if (!(std::abs(law.m) * law.a <= 1.0)) throw std::invalid_argument("limit law: |m| must be at most 1/a");
}

double konno_density(double x, double a) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("konno_density: a must lie in (0, 1)");
  if (!(std::abs(x) < a)) return 0.0;
  return std::sqrt(1.0 - a * a) / (pi * (1.0 - x * x) * std::sqrt(a * a - x * x));
}

double bias_coefficient(const Qubit& q, double theta0) {
  const cplx cross = std::polar(1.0, theta0) * q.alpha * std::conj(q.beta);
  return std::norm(q.alpha) - std::norm(q.beta) + 2.0 * cross.real();
}

double limit_density(double x, const LimitLaw& law) {
  validate(law);
  return konno_density(x, law.a) * (1.0 - law.m * x);
}

double limit_cdf(double x, const LimitLaw& law) {
  validate(law);
  if (x <= -law.a) return 0.0;
  if (x >= law.a) return 1.0;
  return cdf_phi(std::asin(x / law.a), law);
}

double limit_quantile(double u, const LimitLaw& law) {
  validate(law);
  if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("limit_quantile: u must lie in [0, 1]");
  double lo = -pi / 2, hi = pi / 2;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf_phi(mid, law) < u ? lo : hi) = mid;
  }
  return law.a * std::sin(0.5 * (lo + hi));
}

double limit_moment(unsigned r, const LimitLaw& law) {
  validate(law);
  const double ar = law.a;
  return integrate(
      default_rule(),
      [&](double phi) { return std::pow(ar * std::sin(phi), static_cast<double>(r)) * phi_weight(phi, law); },
      -pi / 2, pi / 2);
}

void write_density_csv(std::ostream& out, const LimitLaw& law, std::size_t grid, double lo, double hi) {
  validate(law);
  if (grid < 2) throw std::invalid_argument("density grid needs at least 2 points");
  out << "x,f\n";
  const double dx = (hi - lo) / static_cast<double>(grid - 1);
  for (std::size_t i = 0; i < grid; ++i) {
    // exact endpoints and an exact 0 at the centre for odd grids
    double x = lo + dx * static_cast<double>(i);
    if (i == grid - 1) x = hi;
    if (2 * i + 1 == grid && lo == -hi) x = 0.0;
    out << format_double(x) << ',' << format_double(limit_density(x, law)) << '\n';
  }
}

}  // namespace qdw
