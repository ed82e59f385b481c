#include "qdw/coin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace qdw {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool normalized(const Qubit& q) { return std::abs(q.norm2() - 1.0) <= kUnitarityTol; }

}  // namespace

std::mt19937_64 make_engine(const SeedSpec& seed, Stream stream) {
  std::uint64_t h = splitmix64(seed.master_seed);
  h = splitmix64(h ^ seed.realization_index);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  std::seed_seq seq{static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32)};
  return std::mt19937_64(seq);
}

CoinMatrix make_coin(double theta) {
  if (!std::isfinite(theta)) throw std::invalid_argument("make_coin: theta must be finite");
  const double s = std::numbers::sqrt2 / 2.0;
  const cplx phase = std::polar(1.0, theta);
  return CoinMatrix{s, s * phase, s * std::conj(phase), -s, theta};
}

StepOperators split_coin(const CoinMatrix& u) {
  if (unitarity_defect(u) > kUnitarityTol)
    throw std::invalid_argument("split_coin: matrix is not unitary");
  return StepOperators{Mat2{u.a, u.b, 0.0, 0.0}, Mat2{0.0, 0.0, u.c, u.d}};
}

double unitarity_defect(const CoinMatrix& u) {
  const cplx delta = u.det();
  double defect = 0.0;
  defect = std::max(defect, std::abs(std::norm(u.a) + std::norm(u.c) - 1.0));
  defect = std::max(defect, std::abs(std::norm(u.b) + std::norm(u.d) - 1.0));
  defect = std::max(defect, std::abs(u.a * std::conj(u.c) + u.b * std::conj(u.d)));
  defect = std::max(defect, std::abs(std::abs(delta) - 1.0));
  defect = std::max(defect, std::abs(u.c + delta * std::conj(u.b)));
  defect = std::max(defect, std::abs(u.d - delta * std::conj(u.a)));
  return defect;
}

void validate(const DisorderModel& model) {
  if (const auto* f = std::get_if<FixedDisorder>(&model)) {
    if (!std::isfinite(f->theta)) throw std::invalid_argument("fixed disorder: theta must be finite");
  } else if (const auto* d = std::get_if<DiscreteDisorder>(&model)) {
    if (d->values.empty() || d->values.size() != d->weights.size())
      throw std::invalid_argument("discrete disorder: values and weights must be nonempty and equal length");
    for (double v : d->values)
      if (!std::isfinite(v)) throw std::invalid_argument("discrete disorder: values must be finite");
    for (double w : d->weights)
      if (!(w >= 0.0)) throw std::invalid_argument("discrete disorder: weights must be nonnegative");
    const double total = std::accumulate(d->weights.begin(), d->weights.end(), 0.0);
    if (std::abs(total - 1.0) > kUnitarityTol)
      throw std::invalid_argument("discrete disorder: weights must sum to 1");
  }
}

DisorderRealization sample_disorder(const DisorderModel& model, std::size_t steps,
                                    const SeedSpec& seed) {
  validate(model);
  DisorderRealization r;
  r.thetas.resize(steps + 1);
  if (const auto* f = std::get_if<FixedDisorder>(&model)) {
    std::fill(r.thetas.begin(), r.thetas.end(), f->theta);
    return r;
  }
  auto engine = make_engine(seed, Stream::disorder);
  if (std::holds_alternative<UniformDisorder>(model)) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    for (double& th : r.thetas) th = phase(engine);
  } else {
    const auto& d = std::get<DiscreteDisorder>(model);
    std::discrete_distribution<std::size_t> pick(d.weights.begin(), d.weights.end());
    for (double& th : r.thetas) th = d.values[pick(engine)];
  }
  return r;
}

Qubit draw_qubit(const InitMode& mode, const SeedSpec& seed) {
  if (const auto* e = std::get_if<ExplicitInit>(&mode)) {
    if (!normalized(e->q)) throw std::invalid_argument("initial qubit must satisfy |alpha|^2+|beta|^2=1");
    return e->q;
  }
  // Four i.i.d. normals normalized: uniform on S^3, i.e. Haar on C^2.
  auto engine = make_engine(seed, Stream::qubit);
  std::normal_distribution<double> gauss;
  double g[4];
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (double& x : g) {
      x = gauss(engine);
      n2 += x * x;
    }
  } while (n2 < 1e-300);
  const double inv = 1.0 / std::sqrt(n2);
  return Qubit{cplx(g[0] * inv, g[1] * inv), cplx(g[2] * inv, g[3] * inv)};
}

Qubit dress_qubit(const Qubit& q, double theta0) {
  const cplx half = std::polar(1.0, theta0 / 2.0);
  return Qubit{q.alpha * half, q.beta * std::conj(half)};
}

Qubit sample_initial_qubit(const InitMode& mode, double theta0, const SeedSpec& seed) {
  if (!std::isfinite(theta0)) throw std::invalid_argument("theta0 must be finite");
  return dress_qubit(draw_qubit(mode, seed), theta0);
}

}  // namespace qdw
