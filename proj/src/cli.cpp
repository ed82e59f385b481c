#include "qdw/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "qdw/convergence.hpp"
#include "qdw/csv.hpp"
#include "qdw/evolution.hpp"
#include "qdw/limit_law.hpp"
#include "qdw/spectral.hpp"

namespace qdw {

namespace {

using json = nlohmann::ordered_json;

double parse_double(std::string_view text, const char* what) {
  double v = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
    throw UsageError(std::string("invalid number for ") + what + ": '" + std::string(text) + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

json disorder_json(const DisorderModel& model) {
  if (const auto* f = std::get_if<FixedDisorder>(&model)) return {{"kind", "fixed"}, {"theta", f->theta}};
  if (std::holds_alternative<UniformDisorder>(model)) return {{"kind", "uniform"}};
  const auto& d = std::get<DiscreteDisorder>(model);
  return {{"kind", "discrete"}, {"values", d.values}, {"weights", d.weights}};
}

json init_json(const InitMode& mode) {
  if (const auto* e = std::get_if<ExplicitInit>(&mode))
    return {{"kind", "explicit"},
            {"alpha", {e->q.alpha.real(), e->q.alpha.imag()}},
            {"beta", {e->q.beta.real(), e->q.beta.imag()}}};
  return {{"kind", "random"}};
}

json run_json(const RunConfig& cfg) {
  json j;
  j["steps"] = cfg.steps;
  j["realizations"] = cfg.realizations;
  j["master_seed"] = cfg.master_seed;
  j["theta"] = disorder_json(cfg.model);
  j["init"] = init_json(cfg.init);
  j["theta0"] = cfg.theta0 ? json(*cfg.theta0) : json("first disorder draw");
  j["checkpoints"] = cfg.checkpoints;
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open output file '" + path + "'");
  f << content;
  if (!f) throw std::runtime_error("failed writing output file '" + path + "'");
}

void emit(const std::string& out_path, const std::string& csv, json meta) {
  meta["version"] = kVersion;
  meta["csv"] = out_path;
  write_file(out_path, csv);
  write_file(out_path + ".json", meta.dump(2) + "\n");
}

std::vector<std::size_t> default_localize_checkpoints(std::size_t steps) {
  std::vector<std::size_t> cps;
  const double lo = static_cast<double>(std::min<std::size_t>(100, steps));
  const double hi = static_cast<double>(steps);
  constexpr int kPoints = 24;
  for (int i = 0; i < kPoints; ++i) {
    const double t = lo * std::pow(hi / lo, static_cast<double>(i) / (kPoints - 1));
    std::size_t even = static_cast<std::size_t>(std::llround(t / 2.0)) * 2;
    even = std::clamp<std::size_t>(even, 2, steps - steps % 2);
    if (cps.empty() || cps.back() != even) cps.push_back(even);
  }
  return cps;
}

// Flags shared by the Monte Carlo subcommands.
struct RunFlags {
  std::uint32_t steps = 0;
  std::uint32_t realizations = 1;
  std::uint64_t seed = 0;
  std::string theta = "uniform";
  std::string init = "random";
  std::optional<double> theta0;
  std::string checkpoints;
  std::string out;

  void attach(CLI::App* sub, bool with_checkpoints) {
    sub->add_option("--steps", steps, "number of walk steps T")->required();
    sub->add_option("--realizations", realizations, "number of disorder realizations N")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--theta", theta, "fixed:<f64> | uniform | discrete:<v1:w1,v2:w2,...>");
    sub->add_option("--init", init, "<a_re>,<a_im>,<b_re>,<b_im> | random");
    sub->add_option("--theta0", theta0, "phase dressing the initial qubit (default: first disorder draw)");
    if (with_checkpoints) sub->add_option("--checkpoints", checkpoints, "comma-separated step counts");
    sub->add_option("--out", out, "output CSV path")->required();
  }

  RunConfig config(std::vector<std::size_t> default_checkpoints) const {
    RunConfig cfg;
    cfg.steps = steps;
    cfg.realizations = realizations;
    cfg.master_seed = seed;
    cfg.model = parse_disorder(theta);
    cfg.init = parse_init(init);
    cfg.theta0 = theta0;
    cfg.checkpoints = checkpoints.empty() ? std::move(default_checkpoints) : parse_checkpoints(checkpoints);
    try {
      validate(cfg);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }
};

}  // namespace

DisorderModel parse_disorder(const std::string& text) {
  if (text == "uniform") return UniformDisorder{};
  if (text.rfind("fixed:", 0) == 0) return FixedDisorder{parse_double(text.substr(6), "--theta fixed")};
  if (text.rfind("discrete:", 0) == 0) {
    DiscreteDisorder d;
    for (const auto& pair : split(text.substr(9), ',')) {
      const auto colon = pair.rfind(':');
      if (colon == std::string::npos) throw UsageError("discrete disorder entries must be <value>:<weight>");
      d.values.push_back(parse_double(pair.substr(0, colon), "--theta discrete value"));
      d.weights.push_back(parse_double(pair.substr(colon + 1), "--theta discrete weight"));
    }
    try {
      validate(DisorderModel{d});
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return d;
  }
  throw UsageError("--theta must be fixed:<f64>, uniform or discrete:<v1:w1,...>");
}

InitMode parse_init(const std::string& text) {
  if (text == "random") return HaarInit{};
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw UsageError("--init must be <a_re>,<a_im>,<b_re>,<b_im> or random");
  Qubit q{cplx(parse_double(parts[0], "--init"), parse_double(parts[1], "--init")),
          cplx(parse_double(parts[2], "--init"), parse_double(parts[3], "--init"))};
  if (std::abs(q.norm2() - 1.0) > kUnitarityTol) throw UsageError("--init qubit must satisfy |a|^2+|b|^2=1");
  return ExplicitInit{q};
}

std::vector<std::size_t> parse_checkpoints(const std::string& text) {
  std::vector<std::size_t> cps;
  for (const auto& part : split(text, ',')) {
    std::size_t v = 0;
    const auto res = std::from_chars(part.data(), part.data() + part.size(), v);
    if (part.empty() || res.ec != std::errc() || res.ptr != part.data() + part.size())
      throw UsageError("invalid checkpoint '" + part + "'");
    cps.push_back(v);
  }
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  return cps;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Disordered quantum walk laboratory", "qdw"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunFlags sim_flags;
  auto* simulate = app.add_subcommand("simulate", "exact distribution P(X_t = x), ensemble-averaged over N realizations");
  sim_flags.attach(simulate, false);

  std::uint32_t spec_grid = 4096;
  std::string spec_theta = "fixed:0";
  std::string spec_out;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "dispersion, eigenvalues and group velocities of U^(k)");
  spectrum_cmd->add_option("--grid", spec_grid, "number of k points")->check(CLI::PositiveNumber);
  spectrum_cmd->add_option("--theta", spec_theta, "fixed:<f64> coin phase");
  spectrum_cmd->add_option("--out", spec_out, "output CSV path")->required();

  double dens_m = 0.0;
  std::uint32_t dens_grid = 2001;
  std::string dens_out;
  auto* density = app.add_subcommand("density", "limit density f(x) = f_K(x; 1/sqrt2)(1 - m x)");
  density->add_option("--m", dens_m, "bias coefficient");
  density->add_option("--grid", dens_grid, "number of x points on [-0.75, 0.75]");
  density->add_option("--out", dens_out, "output CSV path")->required();

  RunFlags conv_flags;
  auto* converge = app.add_subcommand("converge", "KS distance and moments of X_t/t against the limit law");
  conv_flags.attach(converge, true);

  RunFlags loc_flags;
  auto* localize = app.add_subcommand("localize", "return probability P(X_t = 0) and its log-log decay slope");
  loc_flags.attach(localize, true);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  // Stage 1: resolve and validate every input. Nothing is written before this succeeds.
  std::function<void()> action;
  try {
    if (simulate->parsed()) {
      const auto& f = sim_flags;
      if (f.steps == 0) {
        RunFlags copy = f;
        copy.steps = 1;  // validate disorder/init with a nonempty schedule
        const RunConfig cfg = copy.config({1});
        action = [cfg, out_path = f.out] {
          DistributionTable d{0, {{0, 1.0}}};
          std::ostringstream csv;
          write_distribution_csv(csv, d);
          json meta{{"subcommand", "simulate"}, {"config", run_json(cfg)}};
          meta["config"]["steps"] = 0;
          meta["config"]["checkpoints"] = json::array({0});
          emit(out_path, csv.str(), meta);
        };
      } else {
        const RunConfig cfg = f.config({f.steps});
        action = [cfg, out_path = f.out] {
          const MonteCarloResult mc = monte_carlo_run(cfg);
          std::ostringstream csv;
          write_distribution_csv(csv, mc.checkpoints.back().table());
          emit(out_path, csv.str(), {{"subcommand", "simulate"}, {"config", run_json(cfg)}});
        };
      }
    } else if (spectrum_cmd->parsed()) {
      const DisorderModel model = parse_disorder(spec_theta);
      const auto* fixed = std::get_if<FixedDisorder>(&model);
      if (!fixed) throw UsageError("spectrum --theta must be fixed:<f64>");
      const double theta = fixed->theta;
      action = [=] {
        std::ostringstream csv;
        write_spectrum_csv(csv, spectrum(spec_grid, theta));
        const FlatBandReport fb = flat_band_report(std::max<std::size_t>(spec_grid, 16), theta);
        emit(spec_out, csv.str(),
             {{"subcommand", "spectrum"},
              {"config", {{"grid", spec_grid}, {"theta", theta}}},
              {"flat_band", {{"band_arg_range_1", fb.band_arg_range_1}, {"band_arg_range_2", fb.band_arg_range_2}}}});
      };
    } else if (density->parsed()) {
      LimitLaw law;
      law.m = dens_m;
      try {
        validate(law);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      if (dens_grid < 2) throw UsageError("density --grid must be at least 2");
      action = [=] {
        std::ostringstream csv;
        write_density_csv(csv, law, dens_grid);
        emit(dens_out, csv.str(),
             {{"subcommand", "density"},
              {"config", {{"m", law.m}, {"a", law.a}, {"grid", dens_grid}, {"x_min", -0.75}, {"x_max", 0.75}}}});
      };
    } else if (converge->parsed()) {
      const RunConfig cfg = conv_flags.config({conv_flags.steps});
      action = [cfg, out_path = conv_flags.out] {
        const MonteCarloResult mc = monte_carlo_run(cfg);
        const LimitLaw law = ensemble_law(cfg, mc);
        const ConvergenceReport report = moment_convergence(mc, law, 4);
        std::ostringstream csv;
        write_report_csv(csv, report);
        const bool conditional = std::holds_alternative<ExplicitInit>(cfg.init);
        emit(out_path, csv.str(),
             {{"subcommand", "converge"},
              {"config", run_json(cfg)},
              {"mode", conditional ? "conditional" : "annealed"},
              {"limit_law", {{"a", law.a}, {"m", law.m}}}});
      };
    } else if (localize->parsed()) {
      if (loc_flags.steps < 2) throw UsageError("localize --steps must be at least 2");
      const RunConfig cfg = loc_flags.config(default_localize_checkpoints(loc_flags.steps));
      action = [cfg, out_path = loc_flags.out] {
        const ReturnProbabilitySeries s = return_probability(cfg);
        std::ostringstream csv;
        write_return_csv(csv, s);
        emit(out_path, csv.str(),
             {{"subcommand", "localize"},
              {"config", run_json(cfg)},
              {"fit", {{"slope", std::isfinite(s.slope) ? json(s.slope) : json(nullptr)},
                       {"t_min", s.fit_t_min},
                       {"t_max", s.fit_t_max},
                       {"points", s.fit_points}}}});
      };
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  // Stage 2: compute and write.
  try {
    action();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace qdw
