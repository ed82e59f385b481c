#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "qdw/coin.hpp"

namespace qdw {

/// U^(k) = M(k) U(theta), M(k) = diag(e^{ik}, e^{-ik}).
struct FourierOperator {
  double k = 0.0;
  double theta = 0.0;
  Eigen::Matrix2cd entries;
};

struct SpectralPoint {
  double k = 0.0;
  double w = 0.0;
  cplx lambda1;  // -e^{-iw}
  cplx lambda2;  //  e^{iw}
  double h1 = 0.0;
  double h2 = 0.0;
  Eigen::Vector2cd v1;
  Eigen::Vector2cd v2;
};

/// w(k) = arcsin(sin k / sqrt2), principal branch in [-pi/4, pi/4].
double dispersion(double k);

/// w'(k) = cos k / sqrt(2 - sin^2 k).
double dispersion_derivative(double k);

FourierOperator fourier_operator(double k, double theta);

/// Eigenpairs from the characteristic polynomial. lambda2 is the root with positive real part
/// (e^{iw}); eigenvectors are unit-norm with their largest-magnitude component real positive.
SpectralPoint eigensystem(const FourierOperator& op);

struct GroupVelocity {
  double h1;
  double h2;
};

/// h_j = D lambda_j / lambda_j with D = i d/dk: h1 = w'(k), h2 = -w'(k).
GroupVelocity group_velocity(double k);

struct FlatBandReport {
  double band_arg_range_1;
  double band_arg_range_2;
};

/// Range of a continuous branch of arg lambda_j(k) over k_j = -pi + 2 pi j / grid.
/// A k-independent (flat) band gives 0. Requires grid >= 16.
FlatBandReport flat_band_report(std::size_t grid, double theta = 0.0);

/// Same diagnostic for an arbitrary k -> 2x2 operator (control cases).
FlatBandReport flat_band_report(std::size_t grid,
                                const std::function<Eigen::Matrix2cd(double)>& op);

/// |(w(k+eps) - w(k-eps)) / (2 eps) - w'(k)|. Requires 0 < eps <= 1e-4.
double finite_diff_velocity_check(double k, double eps);

/// Uniform periodic grid k_j = -pi + 2 pi j / grid, j = 0..grid-1.
std::vector<SpectralPoint> spectrum(std::size_t grid, double theta = 0.0);

/// CSV with header `k,w,re_l1,im_l1,re_l2,im_l2,h1,h2`.
void write_spectrum_csv(std::ostream& out, const std::vector<SpectralPoint>& points);

}  // namespace qdw
