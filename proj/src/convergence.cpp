#include "qdw/convergence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "qdw/csv.hpp"

namespace qdw {

namespace {

constexpr std::size_t kBlock = 32;

struct RealizationResult {
  std::vector<std::vector<double>> p;  // one per checkpoint
  double bias = 0.0;
};

void run_realization(const RunConfig& cfg, std::size_t index, RealizationResult& out) {
  const SeedSpec seed{cfg.master_seed, index};
  DisorderRealization disorder = sample_disorder(cfg.model, cfg.steps, seed);
  if (cfg.theta0) disorder.thetas[0] = *cfg.theta0;
  const double theta0 = disorder.thetas[0];
  const Qubit bare = draw_qubit(cfg.init, seed);
  out.bias = bias_coefficient(bare, theta0);
  out.p.resize(cfg.checkpoints.size());
  std::size_t slot = 0;
  evolve_with_checkpoints(dress_qubit(bare, theta0), disorder, cfg.checkpoints,
                          [&](std::int64_t t, std::span<const Spinor> amps) {
                            auto& p = out.p[slot++];
                            p.resize(static_cast<std::size_t>(t + 1));
                            for (std::size_t i = 0; i < p.size(); ++i) p[i] = amps[2 * i].norm2();
                          });
}

}  // namespace

void validate(const RunConfig& cfg) {
  validate(cfg.model);
  if (cfg.realizations == 0) throw std::invalid_argument("run config: need at least one realization");
  if (cfg.checkpoints.empty()) throw std::invalid_argument("run config: checkpoints must be nonempty");
  if (!std::is_sorted(cfg.checkpoints.begin(), cfg.checkpoints.end()))
    throw std::invalid_argument("run config: checkpoints must be sorted");
  if (cfg.checkpoints.front() < 1 || cfg.checkpoints.back() > cfg.steps)
    throw std::invalid_argument("run config: checkpoints must lie in [1, steps]");
  if (cfg.theta0 && !std::isfinite(*cfg.theta0)) throw std::invalid_argument("run config: theta0 must be finite");
  if (const auto* e = std::get_if<ExplicitInit>(&cfg.init); e && std::abs(e->q.norm2() - 1.0) > kUnitarityTol)
    throw std::invalid_argument("run config: initial qubit must be normalized");
}

double EnsembleDistribution::total() const {
  double s = 0.0;
  for (double v : p) s += v;
  return s;
}

DistributionTable EnsembleDistribution::table() const {
  DistributionTable d;
  d.t = t;
  d.entries.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) d.entries.push_back({x_at(i), p[i]});
  return d;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QDW_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

MonteCarloResult monte_carlo_run(const RunConfig& cfg, unsigned threads) {
  validate(cfg);
  const unsigned workers = resolve_threads(threads);

  MonteCarloResult result;
  result.checkpoints.resize(cfg.checkpoints.size());
  for (std::size_t c = 0; c < cfg.checkpoints.size(); ++c) {
    result.checkpoints[c].t = static_cast<std::int64_t>(cfg.checkpoints[c]);
    result.checkpoints[c].p.assign(cfg.checkpoints[c] + 1, 0.0);
  }

  std::vector<RealizationResult> block(kBlock);
  double bias_sum = 0.0;
  for (std::size_t start = 0; start < cfg.realizations; start += kBlock) {
    const std::size_t count = std::min(kBlock, cfg.realizations - start);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
      for (std::size_t j = next++; j < count; j = next++) {
        try {
          run_realization(cfg, start + j, block[j]);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    if (n_threads <= 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(n_threads);
      for (unsigned w = 0; w < n_threads; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    // fixed-order reduction
    for (std::size_t j = 0; j < count; ++j) {
      bias_sum += block[j].bias;
      for (std::size_t c = 0; c < result.checkpoints.size(); ++c) {
        auto& acc = result.checkpoints[c].p;
        const auto& p = block[j].p[c];
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += p[i];
      }
    }
  }

  const double inv_n = 1.0 / static_cast<double>(cfg.realizations);
  for (auto& cp : result.checkpoints)
    for (double& v : cp.p) v *= inv_n;
  result.mean_bias = bias_sum * inv_n;
  return result;
}

double ks_distance(const EnsembleDistribution& d, const LimitLaw& law) {
  if (d.t < 1) throw std::invalid_argument("ks_distance: need t >= 1");
  const double t = static_cast<double>(d.t);
  double cum = 0.0;
  double sup = 0.0;
  for (std::size_t i = 0; i < d.p.size(); ++i) {
    const double f = limit_cdf(static_cast<double>(d.x_at(i)) / t, law);
    sup = std::max(sup, std::abs(cum - f));
    cum += d.p[i];
    sup = std::max(sup, std::abs(cum - f));
  }
  return std::min(sup, 1.0);
}

LimitLaw ensemble_law(const RunConfig& cfg, const MonteCarloResult& mc) {
  LimitLaw law;
  if (std::holds_alternative<ExplicitInit>(cfg.init)) law.m = mc.mean_bias;
  return law;
}

double return_probability_at(const EnsembleDistribution& d) {
  if (d.t % 2 != 0) return 0.0;
  return d.p[static_cast<std::size_t>(d.t / 2)];
}

ConvergenceReport moment_convergence(const MonteCarloResult& mc, const LimitLaw& law, unsigned r_max) {
  if (r_max < 1 || r_max > 6) throw std::invalid_argument("moment_convergence: r_max must be in [1, 6]");
  ConvergenceReport report;
  report.law = law;
  report.r_max = r_max;
  std::vector<double> limits(r_max);
  for (unsigned r = 1; r <= r_max; ++r) limits[r - 1] = limit_moment(r, law);
  for (const auto& cp : mc.checkpoints) {
    ConvergenceRow row;
    row.t = cp.t;
    row.ks = ks_distance(cp, law);
    const DistributionTable table = cp.table();
    const double t = static_cast<double>(cp.t);
    for (unsigned r = 1; r <= r_max; ++r)
      row.moments.push_back(empirical_moment(table, r) / std::pow(t, static_cast<double>(r)));
    row.limit_moments = limits;
    row.p_return = return_probability_at(cp);
    report.rows.push_back(std::move(row));
  }
  return report;
}

ConvergenceReport moment_convergence(const RunConfig& cfg, unsigned r_max, unsigned threads) {
  const MonteCarloResult mc = monte_carlo_run(cfg, threads);
  return moment_convergence(mc, ensemble_law(cfg, mc), r_max);
}

ReturnProbabilitySeries return_probability(const MonteCarloResult& mc) {
  ReturnProbabilitySeries s;
  for (const auto& cp : mc.checkpoints) {
    s.t.push_back(cp.t);
    s.p_return.push_back(return_probability_at(cp));
  }
  if (s.t.empty()) return s;
  const std::int64_t t_max = s.t.back();
  const std::int64_t t_min = std::max<std::int64_t>(200, t_max / 10);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.t.size(); ++i) {
    if (s.t[i] < t_min || s.t[i] % 2 != 0 || !(s.p_return[i] > 0.0)) continue;
    const double lx = std::log(static_cast<double>(s.t[i]));
    const double ly = std::log(s.p_return[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  s.fit_t_min = t_min;
  s.fit_t_max = t_max;
  s.fit_points = n;
  const double denom = static_cast<double>(n) * sxx - sx * sx;
  s.slope = n >= 2 && denom != 0.0 ? (static_cast<double>(n) * sxy - sx * sy) / denom
                                   : std::numeric_limits<double>::quiet_NaN();
  return s;
}

ReturnProbabilitySeries return_probability(const RunConfig& cfg, unsigned threads) {
  return return_probability(monte_carlo_run(cfg, threads));
}

void write_report_csv(std::ostream& out, const ConvergenceReport& report) {
  if (report.r_max < 4) throw std::invalid_argument("report CSV needs moments up to r = 4");
  out << "t,ks,m1,m2,m3,m4,limit_m1,limit_m2,limit_m3,limit_m4,p_return\n";
  for (const auto& row : report.rows) {
    out << row.t << ',' << format_double(row.ks);
    for (unsigned r = 0; r < 4; ++r) out << ',' << format_double(row.moments[r]);
    for (unsigned r = 0; r < 4; ++r) out << ',' << format_double(row.limit_moments[r]);
    out << ',' << format_double(row.p_return) << '\n';
  }
}

void write_return_csv(std::ostream& out, const ReturnProbabilitySeries& series) {
  out << "t,p_return\n";
  for (std::size_t i = 0; i < series.t.size(); ++i)
    out << series.t[i] << ',' << format_double(series.p_return[i]) << '\n';
}

}  // namespace qdw
