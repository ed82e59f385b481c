#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "qdw/coin.hpp"

namespace qdw {

struct Spinor {
  cplx up;
  cplx down;

  double norm2() const { return std::norm(up) + std::norm(down); }
};

/// Amplitudes psi_t(x) for x in [-t, t], stored densely at index x + t.
class WalkerState {
 public:
  WalkerState() : amps_(1) {}
  WalkerState(std::int64_t t, std::vector<Spinor> amps);

  std::int64_t t() const { return t_; }
  std::int64_t min_x() const { return -t_; }
  std::int64_t max_x() const { return t_; }

  /// Zero outside [-t, t].
  Spinor at(std::int64_t x) const;

  const std::vector<Spinor>& amplitudes() const { return amps_; }
  std::vector<Spinor>& amplitudes() { return amps_; }

  double total_probability() const;

 private:
  std::int64_t t_ = 0;
  std::vector<Spinor> amps_;
};

struct DistributionEntry {
  std::int64_t x;
  double p;
};

/// P(X_t = x) over the parity-allowed positions of [-t, t], sorted by x.
struct DistributionTable {
  std::int64_t t = 0;
  std::vector<DistributionEntry> entries;

  double total() const;
};

WalkerState init_state(const Qubit& q);

/// psi_{t+1}(x) = P psi_t(x+1) + Q psi_t(x-1).
WalkerState step(const WalkerState& s, const StepOperators& ops);

/// Applies step t with make_coin(r.thetas[t]) for t = 1..steps.
/// Throws std::invalid_argument if the realization is shorter than steps+1.
WalkerState evolve(const Qubit& q, const DisorderRealization& r, std::size_t steps);

/// Evolves and calls observe(t, amplitudes over [-t, t]) at each step listed in `checkpoints`
/// (sorted ascending). Two buffers are reused for the whole history.
template <class Observer>
void evolve_with_checkpoints(const Qubit& q, const DisorderRealization& r,
                             const std::vector<std::size_t>& checkpoints, Observer&& observe);

DistributionTable distribution(const WalkerState& s);
DistributionTable distribution(std::int64_t t, std::span<const Spinor> amps);

/// sum_x x^r p(x).
double empirical_moment(const DistributionTable& d, unsigned r);

/// Cross-check engine: pointwise evolution of psi^(k) by M(k)U(theta_t) on a uniform grid of
/// `grid` k-points, then an exact inverse DFT. Requires grid >= 2*steps + 2.
WalkerState fourier_evolve(const Qubit& q, const DisorderRealization& r, std::size_t steps,
                           std::size_t grid);

/// CSV with header `t,x,p`.
void write_distribution_csv(std::ostream& out, const DistributionTable& d);

namespace detail {
void step_into(const std::vector<Spinor>& in, const StepOperators& ops, std::vector<Spinor>& out);
}

template <class Observer>
void evolve_with_checkpoints(const Qubit& q, const DisorderRealization& r,
                             const std::vector<std::size_t>& checkpoints, Observer&& observe) {
  const std::size_t last = checkpoints.empty() ? 0 : checkpoints.back();
  if (r.thetas.size() < last + 1)
    throw std::invalid_argument("evolve: disorder realization shorter than requested steps");
  std::vector<Spinor> cur;
  std::vector<Spinor> next;
  cur.reserve(2 * last + 1);
  next.reserve(2 * last + 1);
  cur.assign(1, Spinor{q.alpha, q.beta});
  auto cp = checkpoints.begin();
  while (cp != checkpoints.end() && *cp == 0) {
    observe(std::int64_t{0}, std::span<const Spinor>(cur));
    ++cp;
  }
  for (std::size_t t = 1; t <= last; ++t) {
    detail::step_into(cur, split_coin(make_coin(r.thetas[t])), next);
    cur.swap(next);
    while (cp != checkpoints.end() && *cp == t) {
      observe(static_cast<std::int64_t>(t), std::span<const Spinor>(cur));
      ++cp;
    }
  }
}

}  // namespace qdw
