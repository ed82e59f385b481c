#include "qdw/evolution.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "qdw/csv.hpp"

namespace qdw {

WalkerState::WalkerState(std::int64_t t, std::vector<Spinor> amps) : t_(t), amps_(std::move(amps)) {
  if (t < 0 || amps_.size() != static_cast<std::size_t>(2 * t + 1))
    throw std::invalid_argument("WalkerState: amplitude array must cover [-t, t]");
}

Spinor WalkerState::at(std::int64_t x) const {
  if (x < -t_ || x > t_) return {};
  return amps_[static_cast<std::size_t>(x + t_)];
}

double WalkerState::total_probability() const {
  double total = 0.0;
  for (const auto& s : amps_) total += s.norm2();
  return total;
}

double DistributionTable::total() const {
  double total = 0.0;
  for (const auto& e : entries) total += e.p;
  return total;
}

WalkerState init_state(const Qubit& q) { return WalkerState(0, {Spinor{q.alpha, q.beta}}); }

namespace detail {

void step_into(const std::vector<Spinor>& in, const StepOperators& ops, std::vector<Spinor>& out) {
  // With input over [-t, t]: out index j <-> x = j - t - 1, in index i <-> x = i - t.
  // psi(x+1) sits at in[j], psi(x-1) at in[j-2]. Only even j is parity-allowed.
  const std::size_t n_in = in.size();
  const std::size_t n_out = n_in + 2;
  out.resize(n_out);
  const cplx p0 = ops.P[0], p1 = ops.P[1];
  const cplx q0 = ops.Q[2], q1 = ops.Q[3];
  for (std::size_t j = 0; j < n_out; j += 2) {
    Spinor s{};
    if (j < n_in) s.up = p0 * in[j].up + p1 * in[j].down;
    if (j >= 2) s.down = q0 * in[j - 2].up + q1 * in[j - 2].down;
    out[j] = s;
  }
  for (std::size_t j = 1; j < n_out; j += 2) out[j] = Spinor{};
}

}  // namespace detail

WalkerState step(const WalkerState& s, const StepOperators& ops) {
  std::vector<Spinor> out;
  detail::step_into(s.amplitudes(), ops, out);
  return WalkerState(s.t() + 1, std::move(out));
}

WalkerState evolve(const Qubit& q, const DisorderRealization& r, std::size_t steps) {
  WalkerState result;
  evolve_with_checkpoints(q, r, {steps}, [&](std::int64_t t, std::span<const Spinor> amps) {
    result = WalkerState(t, std::vector<Spinor>(amps.begin(), amps.end()));
  });
  return result;
}

DistributionTable distribution(std::int64_t t, std::span<const Spinor> amps) {
  DistributionTable d;
  d.t = t;
  d.entries.reserve(static_cast<std::size_t>(t + 1));
  for (std::int64_t x = -t; x <= t; x += 2)
    d.entries.push_back({x, amps[static_cast<std::size_t>(x + t)].norm2()});
  return d;
}

DistributionTable distribution(const WalkerState& s) {
  return distribution(s.t(), std::span<const Spinor>(s.amplitudes()));
}

double empirical_moment(const DistributionTable& d, unsigned r) {
  double acc = 0.0;
  for (const auto& e : d.entries) {
    acc += std::pow(static_cast<double>(e.x), static_cast<double>(r)) * e.p;
  }
  return acc;
}

WalkerState fourier_evolve(const Qubit& q, const DisorderRealization& r, std::size_t steps,
                           std::size_t grid) {
  if (grid < 2 * steps + 2)
    throw std::invalid_argument("fourier_evolve: grid must be at least 2*steps+2 to avoid aliasing");
  if (r.thetas.size() < steps + 1)
    throw std::invalid_argument("fourier_evolve: disorder realization shorter than requested steps");

  const double dk = 2.0 * std::numbers::pi / static_cast<double>(grid);
  std::vector<Spinor> hat(grid, Spinor{q.alpha, q.beta});
  std::vector<cplx> mk(grid);
  for (std::size_t j = 0; j < grid; ++j) mk[j] = std::polar(1.0, dk * static_cast<double>(j));

  for (std::size_t t = 1; t <= steps; ++t) {
    const CoinMatrix u = make_coin(r.thetas[t]);
    for (std::size_t j = 0; j < grid; ++j) {
      const Spinor s = hat[j];
      hat[j].up = mk[j] * (u.a * s.up + u.b * s.down);
      hat[j].down = std::conj(mk[j]) * (u.c * s.up + u.d * s.down);
    }
  }

  const auto t = static_cast<std::int64_t>(steps);
  const auto n = static_cast<std::int64_t>(grid);
  std::vector<Spinor> amps(2 * steps + 1);
  for (std::int64_t x = -t; x <= t; ++x) {
    Spinor acc{};
    for (std::int64_t j = 0; j < n; ++j) {
      // e^{i k_j x} with the phase index reduced mod grid for accuracy
      const std::int64_t idx = ((j * x) % n + n) % n;
      const cplx e = mk[static_cast<std::size_t>(idx)];
      acc.up += e * hat[static_cast<std::size_t>(j)].up;
      acc.down += e * hat[static_cast<std::size_t>(j)].down;
    }
    amps[static_cast<std::size_t>(x + t)] = Spinor{acc.up / double(grid), acc.down / double(grid)};
  }
  return WalkerState(t, std::move(amps));
}

void write_distribution_csv(std::ostream& out, const DistributionTable& d) {
  out << "t,x,p\n";
  for (const auto& e : d.entries) out << d.t << ',' << e.x << ',' << format_double(e.p) << '\n';
}

}  // namespace qdw
