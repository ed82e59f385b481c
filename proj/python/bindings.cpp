#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qdw/cli.hpp"
#include "qdw/coin.hpp"
#include "qdw/convergence.hpp"
#include "qdw/evolution.hpp"
#include "qdw/limit_law.hpp"
#include "qdw/spectral.hpp"

namespace py = pybind11;

namespace {

Eigen::Matrix2cd to_eigen(const qdw::Mat2& m) {
  Eigen::Matrix2cd out;
  out << m[0], m[1], m[2], m[3];
  return out;
}

qdw::DisorderRealization realization(const std::vector<double>& thetas) {
  return qdw::DisorderRealization{thetas};
}

// (x, up, down) arrays over [-t, t]
py::tuple state_arrays(const qdw::WalkerState& s) {
  const auto n = static_cast<py::ssize_t>(s.amplitudes().size());
  py::array_t<std::int64_t> x(n);
  py::array_t<std::complex<double>> up(n), down(n);
  auto xv = x.mutable_unchecked<1>();
  auto uv = up.mutable_unchecked<1>();
  auto dv = down.mutable_unchecked<1>();
  for (py::ssize_t i = 0; i < n; ++i) {
    xv(i) = s.min_x() + i;
    uv(i) = s.amplitudes()[static_cast<std::size_t>(i)].up;
    dv(i) = s.amplitudes()[static_cast<std::size_t>(i)].down;
  }
  return py::make_tuple(x, up, down);
}

py::tuple table_arrays(const qdw::DistributionTable& d) {
  const auto n = static_cast<py::ssize_t>(d.entries.size());
  py::array_t<std::int64_t> x(n);
  py::array_t<double> p(n);
  auto xv = x.mutable_unchecked<1>();
  auto pv = p.mutable_unchecked<1>();
  for (py::ssize_t i = 0; i < n; ++i) {
    xv(i) = d.entries[static_cast<std::size_t>(i)].x;
    pv(i) = d.entries[static_cast<std::size_t>(i)].p;
  }
  return py::make_tuple(x, p);
}

qdw::RunConfig make_config(std::size_t steps, std::size_t realizations, const std::string& theta,
                           const std::string& init, std::uint64_t seed,
                           std::vector<std::size_t> checkpoints, std::optional<double> theta0) {
  qdw::RunConfig cfg;
  cfg.steps = steps;
  cfg.realizations = realizations;
  cfg.model = qdw::parse_disorder(theta);
  cfg.init = qdw::parse_init(init);
  cfg.master_seed = seed;
  cfg.checkpoints = checkpoints.empty() ? std::vector<std::size_t>{steps} : std::move(checkpoints);
  cfg.theta0 = theta0;
  qdw::validate(cfg);
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_qdw, m) {
  m.doc() = "Disordered one-dimensional quantum walk: evolution, spectra and limit laws.";
  m.attr("__version__") = qdw::kVersion;

  py::register_exception<qdw::UsageError>(m, "UsageError", PyExc_ValueError);

  m.def("make_coin", [](double theta) {
    const auto u = qdw::make_coin(theta);
    return to_eigen({u.a, u.b, u.c, u.d});
  }, py::arg("theta"));

  m.def("split_coin", [](double theta) {
    const auto ops = qdw::split_coin(qdw::make_coin(theta));
    return py::make_tuple(to_eigen(ops.P), to_eigen(ops.Q));
  }, py::arg("theta"), "P and Q for the coin U(theta).");

  m.def("sample_disorder", [](const std::string& model, std::size_t steps, std::uint64_t seed,
                              std::uint64_t index) {
    return qdw::sample_disorder(qdw::parse_disorder(model), steps, {seed, index}).thetas;
  }, py::arg("model"), py::arg("steps"), py::arg("seed") = 0, py::arg("index") = 0);

  m.def("sample_initial_qubit", [](const std::string& init, double theta0, std::uint64_t seed,
                                   std::uint64_t index) {
    const auto q = qdw::sample_initial_qubit(qdw::parse_init(init), theta0, {seed, index});
    return py::make_tuple(q.alpha, q.beta);
  }, py::arg("init"), py::arg("theta0") = 0.0, py::arg("seed") = 0, py::arg("index") = 0);

  m.def("evolve", [](std::complex<double> alpha, std::complex<double> beta,
                     const std::vector<double>& thetas, std::size_t steps) {
    return state_arrays(qdw::evolve({alpha, beta}, realization(thetas), steps));
  }, py::arg("alpha"), py::arg("beta"), py::arg("thetas"), py::arg("steps"),
        "Position-space evolution; returns (x, up, down) over [-t, t].");

  m.def("fourier_evolve", [](std::complex<double> alpha, std::complex<double> beta,
                             const std::vector<double>& thetas, std::size_t steps, std::size_t grid) {
    return state_arrays(qdw::fourier_evolve({alpha, beta}, realization(thetas), steps, grid));
  }, py::arg("alpha"), py::arg("beta"), py::arg("thetas"), py::arg("steps"), py::arg("grid"));

  m.def("distribution", [](std::complex<double> alpha, std::complex<double> beta,
                           const std::vector<double>& thetas, std::size_t steps) {
    return table_arrays(qdw::distribution(qdw::evolve({alpha, beta}, realization(thetas), steps)));
  }, py::arg("alpha"), py::arg("beta"), py::arg("thetas"), py::arg("steps"),
        "P(X_t = x) on the parity-allowed positions; returns (x, p).");

  m.def("dispersion", &qdw::dispersion, py::arg("k"));
  m.def("group_velocity", [](double k) {
    const auto h = qdw::group_velocity(k);
    return py::make_tuple(h.h1, h.h2);
  }, py::arg("k"));
  m.def("fourier_operator", [](double k, double theta) { return qdw::fourier_operator(k, theta).entries; },
        py::arg("k"), py::arg("theta"));
  m.def("eigensystem", [](double k, double theta) {
    const auto sp = qdw::eigensystem(qdw::fourier_operator(k, theta));
    py::dict d;
    d["k"] = sp.k;
    d["w"] = sp.w;
    d["lambda1"] = sp.lambda1;
    d["lambda2"] = sp.lambda2;
    d["h1"] = sp.h1;
    d["h2"] = sp.h2;
    d["v1"] = Eigen::Vector2cd(sp.v1);
    d["v2"] = Eigen::Vector2cd(sp.v2);
    return d;
  }, py::arg("k"), py::arg("theta") = 0.0);
  m.def("flat_band_report", [](std::size_t grid, double theta) {
    const auto r = qdw::flat_band_report(grid, theta);
    return py::make_tuple(r.band_arg_range_1, r.band_arg_range_2);
  }, py::arg("grid"), py::arg("theta") = 0.0);
  m.def("finite_diff_velocity_check", &qdw::finite_diff_velocity_check, py::arg("k"), py::arg("eps"));

  m.def("konno_density", &qdw::konno_density, py::arg("x"), py::arg("a") = qdw::kDefaultSpread);
  m.def("bias_coefficient", [](std::complex<double> alpha, std::complex<double> beta, double theta0) {
    return qdw::bias_coefficient({alpha, beta}, theta0);
  }, py::arg("alpha"), py::arg("beta"), py::arg("theta0") = 0.0);
  m.def("limit_density", [](double x, double m_bias) { return qdw::limit_density(x, {.m = m_bias}); },
        py::arg("x"), py::arg("m") = 0.0);
  m.def("limit_cdf", [](double x, double m_bias) { return qdw::limit_cdf(x, {.m = m_bias}); },
        py::arg("x"), py::arg("m") = 0.0);
  m.def("limit_moment", [](unsigned r, double m_bias) { return qdw::limit_moment(r, {.m = m_bias}); },
        py::arg("r"), py::arg("m") = 0.0);

  m.def("monte_carlo_run", [](std::size_t steps, std::size_t realizations, const std::string& theta,
                              const std::string& init, std::uint64_t seed,
                              std::vector<std::size_t> checkpoints, std::optional<double> theta0,
                              unsigned threads) {
    const auto cfg = make_config(steps, realizations, theta, init, seed, std::move(checkpoints), theta0);
    qdw::MonteCarloResult mc;
    {
      py::gil_scoped_release release;
      mc = qdw::monte_carlo_run(cfg, threads);
    }
    py::dict out;
    for (const auto& cp : mc.checkpoints) out[py::int_(cp.t)] = table_arrays(cp.table());
    return py::make_tuple(out, mc.mean_bias);
  }, py::arg("steps"), py::arg("realizations") = 1, py::arg("theta") = "uniform",
        py::arg("init") = "random", py::arg("seed") = 0, py::arg("checkpoints") = std::vector<std::size_t>{},
        py::arg("theta0") = py::none(), py::arg("threads") = 0,
        "Returns ({t: (x, p)}, mean bias coefficient).");

  m.def("moment_convergence", [](std::size_t steps, std::size_t realizations, const std::string& theta,
                                 const std::string& init, std::uint64_t seed,
                                 std::vector<std::size_t> checkpoints, unsigned r_max, unsigned threads) {
    const auto cfg = make_config(steps, realizations, theta, init, seed, std::move(checkpoints), std::nullopt);
    qdw::ConvergenceReport report;
    {
      py::gil_scoped_release release;
      report = qdw::moment_convergence(cfg, r_max, threads);
    }
    py::list rows;
    for (const auto& row : report.rows) {
      py::dict d;
      d["t"] = row.t;
      d["ks"] = row.ks;
      d["moments"] = row.moments;
      d["limit_moments"] = row.limit_moments;
      d["p_return"] = row.p_return;
      rows.append(d);
    }
    return py::make_tuple(rows, report.law.m);
  }, py::arg("steps"), py::arg("realizations") = 1, py::arg("theta") = "uniform",
        py::arg("init") = "random", py::arg("seed") = 0, py::arg("checkpoints") = std::vector<std::size_t>{},
        py::arg("r_max") = 4, py::arg("threads") = 0);

  m.def("return_probability", [](std::size_t steps, std::size_t realizations, const std::string& theta,
                                 const std::string& init, std::uint64_t seed,
                                 std::vector<std::size_t> checkpoints, unsigned threads) {
    const auto cfg = make_config(steps, realizations, theta, init, seed, std::move(checkpoints), std::nullopt);
    qdw::ReturnProbabilitySeries s;
    {
      py::gil_scoped_release release;
      s = qdw::return_probability(cfg, threads);
    }
    return py::make_tuple(s.t, s.p_return, s.slope);
  }, py::arg("steps"), py::arg("realizations") = 1, py::arg("theta") = "uniform",
        py::arg("init") = "random", py::arg("seed") = 0, py::arg("checkpoints") = std::vector<std::size_t>{},
        py::arg("threads") = 0);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = qdw::run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"), "Runs the command-line front end; returns (exit code, stdout, stderr).");
}
