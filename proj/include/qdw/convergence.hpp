#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qdw/coin.hpp"
#include "qdw/evolution.hpp"
#include "qdw/limit_law.hpp"

namespace qdw {

struct RunConfig {
  std::size_t steps = 0;          // T
  std::size_t realizations = 1;   // N
  DisorderModel model = UniformDisorder{};
  InitMode init = HaarInit{};
  std::uint64_t master_seed = 0;
  std::vector<std::size_t> checkpoints;  // sorted, each in [1, steps]
  std::optional<double> theta0;          // overrides the first disorder draw when set
};

/// Throws std::invalid_argument on N == 0, empty/unsorted checkpoints or checkpoints outside [1, T].
void validate(const RunConfig& cfg);

/// Ensemble-averaged P(X_t = x) over the parity-allowed x = -t, -t+2, ..., t.
struct EnsembleDistribution {
  std::int64_t t = 0;
  std::vector<double> p;

  std::int64_t x_at(std::size_t i) const { return -t + 2 * static_cast<std::int64_t>(i); }
  double total() const;
  DistributionTable table() const;
};

struct MonteCarloResult {
  std::vector<EnsembleDistribution> checkpoints;
  /// Mean over realizations of bias_coefficient(undressed qubit, theta_0).
  double mean_bias = 0.0;
};

/// Worker count: `requested` if positive, else QDW_THREADS if set, else hardware concurrency.
unsigned resolve_threads(unsigned requested = 0);

/// Evolves N independent realizations and averages their distributions at every checkpoint.
/// Realization i draws disorder and qubit from SeedSpec{master_seed, i}; the reduction runs in
/// realization-index order, so the result is bitwise independent of `threads`.
MonteCarloResult monte_carlo_run(const RunConfig& cfg, unsigned threads = 0);

/// sup over atoms of |F_emp(x/t) - F_limit(x/t)|, using both one-sided limits of F_emp.
double ks_distance(const EnsembleDistribution& d, const LimitLaw& law);

/// Conditional mode (explicit init): m = mean bias. Annealed mode (Haar init): m = 0.
LimitLaw ensemble_law(const RunConfig& cfg, const MonteCarloResult& mc);

struct ConvergenceRow {
  std::int64_t t = 0;
  double ks = 0.0;
  std::vector<double> moments;        // E[(X_t/t)^r], r = 1..r_max
  std::vector<double> limit_moments;  // int x^r f, r = 1..r_max
  double p_return = 0.0;
};

struct ConvergenceReport {
  LimitLaw law;
  unsigned r_max = 4;
  std::vector<ConvergenceRow> rows;
};

ConvergenceReport moment_convergence(const MonteCarloResult& mc, const LimitLaw& law, unsigned r_max);
ConvergenceReport moment_convergence(const RunConfig& cfg, unsigned r_max, unsigned threads = 0);

/// P(X_t = 0); exactly zero for odd t.
double return_probability_at(const EnsembleDistribution& d);

struct ReturnProbabilitySeries {
  std::vector<std::int64_t> t;
  std::vector<double> p_return;
  double slope = 0.0;  // least squares of log P vs log t over the fit window
  std::int64_t fit_t_min = 0;
  std::int64_t fit_t_max = 0;
  std::size_t fit_points = 0;
};

/// Fit window: even t with t >= max(200, t_max / 10) and P > 0.
ReturnProbabilitySeries return_probability(const MonteCarloResult& mc);
ReturnProbabilitySeries return_probability(const RunConfig& cfg, unsigned threads = 0);

/// Header `t,ks,m1,m2,m3,m4,limit_m1,limit_m2,limit_m3,limit_m4,p_return`; needs r_max >= 4.
void write_report_csv(std::ostream& out, const ConvergenceReport& report);

/// Header `t,p_return`.
void write_return_csv(std::ostream& out, const ReturnProbabilitySeries& series);

}  // namespace qdw
