#include "sirlyap_cli/commands.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "sirlyap/errors.hpp"
#include "sirlyap/json_io.hpp"
#include "sirlyap/levelset.hpp"
#include "sirlyap/ode.hpp"
#include "sirlyap/verify.hpp"

namespace sirlyap::cli {
namespace {

using nlohmann::json;

std::filesystem::path prepare_dir(const RunConfig& config) {
  std::filesystem::path dir(config.output.dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

}  // namespace

DfLyapParams df_params_from(const RunConfig& config) {
  DfOverrides o;
  o.mu0 = config.lyapunov.mu0;
  o.eps = config.lyapunov.eps;
  o.delta = config.lyapunov.delta;
  return select_df_params(config.model, o);
}

EnLyapParams en_params_from(const RunConfig& config) {
  const LyapOverrides& o = config.lyapunov;
  const double l_bar = o.l_bar.value_or(340.0);
  EnLyapParams lp;
  if (o.lambda_hat2 && o.k) {
    lp.lambda_hat2 = *o.lambda_hat2;
    lp.k = *o.k;
    lp.l_bar = l_bar;
    lp.delta = o.delta.value_or(0.5);
    lp.lambda3 = 0.0;
    lp.lambda3 = o.lambda3.value_or(0.5 * lambda3_bound(config.model, lp).bound);
    const FeasibilityReport r = feasibility_report(config.model, lp);
    if (!r.feasible()) {
      throw InfeasibleOverride("endemic overrides are infeasible (k0 = " + std::to_string(r.k0) +
                               ", lambda3 bound = " + std::to_string(r.lambda3.bound) +
                               ", the corner condition margin = " +
                               std::to_string(r.corner.worst_margin) + ")");
    }
    return lp;
  }
  if (o.lambda_hat2 || o.k) {
    throw ConfigError("lambda_hat2 and k must be given together");
  }
  lp = select_en_params(config.model, EnTarget{l_bar, std::nullopt});
  if (o.delta) lp.delta = *o.delta;
  if (o.lambda3) lp.lambda3 = *o.lambda3;
  return lp;
}

std::vector<double> default_levels(EquilibriumChoice choice) {
  if (choice == EquilibriumChoice::DiseaseFree) {
    return {10, 30, 60, 100, 180, 260, 340, 420, 500};
  }
  return {20, 100, 180, 260, 340};
}

int cmd_equilibria(const RunConfig& config, std::ostream& out) {
  const ModelParams& p = config.model;
  p.validate();
  json j{{"model", p},
         {"r0_hat", r0_hat(p)},
         {"regime", std::string(to_string(classify_regime(p)))},
         {"endemic_theorem_threshold", endemic_theorem_threshold(p)},
         {"disease_free", disease_free_eq(p).point},
         {"endemic", nullptr}};
  if (r0_hat(p) > 1.0 && classify_regime(p) != Regime::Boundary) {
    j["endemic"] = endemic_eq(p).point;
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_simulate(const RunConfig& config, std::ostream& out) {
  const Trajectory traj = integrate(config.model, config.initial_state, config.signal,
                                    config.t_end, config.dt, config.output.thin);
  const auto path = prepare_dir(config) / "trajectory.csv";
  auto file = open_out(path);
  write_trajectory_csv(file, traj);
  const State& last = traj.states.back();
  out << "wrote " << traj.size() << " rows to " << path.string() << "; final state ("
      << last.s << ", " << last.i << ", " << last.r << ") at t = " << traj.times.back()
      << '\n';
  return kExitOk;
}

int cmd_certify(const RunConfig& config, std::ostream& out) {
  SuiteOptions opts;
  opts.seed = config.seed;
  opts.dt = config.dt;
  opts.t_end = config.t_end;
  VerificationReport report;
  json params;
  if (config.equilibrium == EquilibriumChoice::DiseaseFree) {
    const DiseaseFreeLyapunov lyap(config.model, df_params_from(config));
    params = lyap.params();
    report = certify_disease_free(lyap, opts);
  } else {
    if (classify_regime(config.model) != Regime::EndemicTheoremApplies) {
      throw RegimeError("endemic certification requires R0 > gamma/mu + 2 (R0 = " +
                        std::to_string(r0_hat(config.model)) + ")");
    }
    const EndemicLyapunov lyap(config.model, en_params_from(config));
    params = lyap.params();
    report = certify_endemic(lyap, opts);
  }
  const auto path = prepare_dir(config) / "report.json";
  auto file = open_out(path);
  json j = report;
  j["equilibrium"] = to_string(config.equilibrium);
  j["lyapunov_params"] = params;
  j["model"] = config.model;
  j["seed"] = config.seed;
  file << j.dump(2) << '\n';
  out << format_table(report);
  out << (report.all_passed() ? "all checks passed" : "some checks FAILED") << "; report at "
      << path.string() << '\n';
  return report.all_passed() ? kExitOk : kExitCheckFailed;
}

int cmd_levelsets(const RunConfig& config, std::ostream& out) {
  const std::vector<double> levels =
      config.levels.empty() ? default_levels(config.equilibrium) : config.levels;
  const Plane plane{Plane::Fixed::X3, 0.0};
  std::vector<Contour> contours;
  Equilibrium eq;
  std::string name;
  if (config.equilibrium == EquilibriumChoice::DiseaseFree) {
    const DiseaseFreeLyapunov lyap(config.model, df_params_from(config));
    const double x1h = lyap.equilibrium().point.s;
    eq = lyap.equilibrium();
    contours = extract_contours(LyapunovFunction{lyap}, levels, plane,
                                Window{-x1h, 3.0 * x1h, 0.0, 3.0 * x1h});
    name = "fig1_disease_free_contours.csv";
  } else {
    const EndemicLyapunov lyap(config.model, en_params_from(config));
    const State& xh = lyap.equilibrium().point;
    const EnLyapParams& lp = lyap.params();
    eq = lyap.equilibrium();
    contours = extract_contours(
        LyapunovFunction{lyap}, levels, plane,
        Window{-xh.s, 1.2 * lp.l_bar / lp.lambda1, -0.98 * xh.i, 1.2 * lp.l_bar / lp.lambda0()});
    name = "fig2_endemic_contours.csv";
  }
  const auto path = prepare_dir(config) / name;
  auto file = open_out(path);
  write_contours_csv(file, contours, config.output.absolute ? &eq : nullptr);
  std::size_t lines = 0;
  for (const Contour& c : contours) lines += c.polylines.size();
  out << "wrote " << contours.size() << " levels (" << lines << " polylines) to "
      << path.string() << '\n';
  return kExitOk;
}

int cmd_params(const RunConfig& config, std::ostream& out) {
  json j{{"model", config.model}, {"equilibrium", to_string(config.equilibrium)}};
  if (config.equilibrium == EquilibriumChoice::DiseaseFree) {
    const DiseaseFreeLyapunov lyap(config.model, df_params_from(config));
    j["lyapunov_params"] = lyap.params();
    j["eps_interval"] = json::array({df_eps_interval(config.model).lo,
                                     df_eps_interval(config.model).hi});
    j["chi_per_unit_input"] = lyap.chi(1.0);
    j["decay_rate"] = lyap.decay_rate();
  } else {
    const EnLyapParams lp = en_params_from(config);
    j["lyapunov_params"] = lp;
    j["feasibility"] = feasibility_report(config.model, lp);
  }
  out << j.dump(2) << '\n';
  return kExitOk;
}

}  // namespace sirlyap::cli
