#pragma once

#include <cmath>
#include <cstddef>
#include <iosfwd>

#include "qdw/coin.hpp"

namespace qdw {

/// Limit law of X_t / t: density f_K(x; a) (1 - m x) on (-a, a).
/// Default a is 1 / sqrt(2.0) as rounded by the library sqrt (0.7071067811865475).
inline const double kDefaultSpread = 1.0 / std::sqrt(2.0);

struct LimitLaw {
  double a = kDefaultSpread;
  double m = 0.0;
};

/// Throws std::invalid_argument unless 0 < a < 1 and |m| <= 1/a.
void validate(const LimitLaw& law);

/// sqrt(1 - a^2) / (pi (1 - x^2) sqrt(a^2 - x^2)) for |x| < a, 0 otherwise.
double konno_density(double x, double a);

/// m = |alpha|^2 - |beta|^2 + 2 Re(e^{i theta0} alpha conj(beta)) for the undressed qubit.
/// |m| <= sqrt2 for normalized qubits.
double bias_coefficient(const Qubit& q, double theta0);

double limit_density(double x, const LimitLaw& law);

/// F(x) = int_{-a}^{x} f. Integrated in phi with x = a sin(phi), which makes the integrand smooth.
double limit_cdf(double x, const LimitLaw& law);

/// Inverse of limit_cdf on (0, 1), by bisection in phi.
double limit_quantile(double u, const LimitLaw& law);

/// int x^r f(x) dx.
double limit_moment(unsigned r, const LimitLaw& law);

/// CSV with header `x,f` on `grid` equally spaced points of [lo, hi].
void write_density_csv(std::ostream& out, const LimitLaw& law, std::size_t grid, double lo = -0.75,
                       double hi = 0.75);

}  // namespace qdw
