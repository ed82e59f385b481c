#include "qdw/spectral.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "qdw/csv.hpp"

namespace qdw {

namespace {

using std::numbers::pi;

std::pair<cplx, cplx> sorted_eigenvalues(const Eigen::Matrix2cd& m) {
  const cplx tr = m.trace();
  const cplx det = m.determinant();
  const cplx root = std::sqrt(tr * tr - 4.0 * det);
  cplx l_plus = 0.5 * (tr + root);
  cplx l_minus = 0.5 * (tr - root);
  // band 2 is the branch through +1 at k = 0
  if (l_plus.real() < l_minus.real() ||
      (l_plus.real() == l_minus.real() && l_plus.imag() < l_minus.imag()))
    std::swap(l_plus, l_minus);
  return {l_minus, l_plus};
}

Eigen::Vector2cd unit_eigenvector(const Eigen::Matrix2cd& m, cplx lambda) {
  const Eigen::Vector2cd from_row0(m(0, 1), lambda - m(0, 0));
  const Eigen::Vector2cd from_row1(lambda - m(1, 1), m(1, 0));
  Eigen::Vector2cd v = from_row0.norm() >= from_row1.norm() ? from_row0 : from_row1;
  v.normalize();
  const Eigen::Index big = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
  v *= std::conj(v(big)) / std::abs(v(big));
  return v;
}

double unwrapped_range(const std::vector<cplx>& values) {
  double prev = std::arg(values.front());
  double acc = prev;
  double lo = acc, hi = acc;
  for (std::size_t i = 1; i < values.size(); ++i) {
    const double a = std::arg(values[i]);
    double d = a - prev;
    d -= 2.0 * pi * std::round(d / (2.0 * pi));
    acc += d;
    prev = a;
    lo = std::min(lo, acc);
    hi = std::max(hi, acc);
  }
  return hi - lo;
}

double grid_k(std::size_t j, std::size_t grid) {
  return -pi + 2.0 * pi * static_cast<double>(j) / static_cast<double>(grid);
}

}  // namespace

double dispersion(double k) { return std::asin(std::sin(k) / std::numbers::sqrt2); }

double dispersion_derivative(double k) {
  const double s = std::sin(k);
  return std::cos(k) / std::sqrt(2.0 - s * s);
}

FourierOperator fourier_operator(double k, double theta) {
  const CoinMatrix u = make_coin(theta);
  const cplx ek = std::polar(1.0, k);
  FourierOperator op{k, theta, {}};
  op.entries << ek * u.a, ek * u.b, std::conj(ek) * u.c, std::conj(ek) * u.d;
  return op;
}

SpectralPoint eigensystem(const FourierOperator& op) {
  SpectralPoint sp;
  sp.k = op.k;
  sp.w = dispersion(op.k);
  std::tie(sp.lambda1, sp.lambda2) = sorted_eigenvalues(op.entries);
  const GroupVelocity h = group_velocity(op.k);
  sp.h1 = h.h1;
  sp.h2 = h.h2;
  sp.v1 = unit_eigenvector(op.entries, sp.lambda1);
  sp.v2 = unit_eigenvector(op.entries, sp.lambda2);
  return sp;
}

GroupVelocity group_velocity(double k) {
  const double dw = dispersion_derivative(k);
  return {dw, -dw};
}

FlatBandReport flat_band_report(std::size_t grid,
                                const std::function<Eigen::Matrix2cd(double)>& op) {
  if (grid < 16) throw std::invalid_argument("flat_band_report: grid must be at least 16");
  std::vector<cplx> band1(grid), band2(grid);
  for (std::size_t j = 0; j < grid; ++j) {
    std::tie(band1[j], band2[j]) = sorted_eigenvalues(op(grid_k(j, grid)));
  }
  return {unwrapped_range(band1), unwrapped_range(band2)};
}

FlatBandReport flat_band_report(std::size_t grid, double theta) {
  return flat_band_report(grid, [theta](double k) { return fourier_operator(k, theta).entries; });
}

double finite_diff_velocity_check(double k, double eps) {
  if (!(eps > 0.0 && eps <= 1e-4))
    throw std::invalid_argument("finite_diff_velocity_check: eps must be in (0, 1e-4]");
  const double central = (dispersion(k + eps) - dispersion(k - eps)) / (2.0 * eps);
  return std::abs(central - dispersion_derivative(k));
}

std::vector<SpectralPoint> spectrum(std::size_t grid, double theta) {
  if (grid == 0) throw std::invalid_argument("spectrum: grid must be positive");
  std::vector<SpectralPoint> out;
  out.reserve(grid);
  for (std::size_t j = 0; j < grid; ++j) out.push_back(eigensystem(fourier_operator(grid_k(j, grid), theta)));
  return out;
}

void write_spectrum_csv(std::ostream& out, const std::vector<SpectralPoint>& points) {
  out << "k,w,re_l1,im_l1,re_l2,im_l2,h1,h2\n";
  for (const auto& p : points) {
    out << format_double(p.k) << ',' << format_double(p.w) << ',' << format_double(p.lambda1.real())
        << ',' << format_double(p.lambda1.imag()) << ',' << format_double(p.lambda2.real()) << ','
        << format_double(p.lambda2.imag()) << ',' << format_double(p.h1) << ','
        << format_double(p.h2) << '\n';
  }
}

}  // namespace qdw
