#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "sirlyap/errors.hpp"
#include "sirlyap_cli/commands.hpp"

namespace {

using namespace sirlyap;
using namespace sirlyap::cli;

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::string levels;
  std::string equilibrium;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config, "JSON run configuration");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--dt", f.dt, "RK4 step size");
  sub->add_option("--t-end", f.t_end, "integration horizon");
  sub->add_option("--levels", f.levels, "comma-separated contour levels");
  sub->add_option("--equilibrium", f.equilibrium, "df | endemic");
}

std::vector<double> parse_levels(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad level '" + item + "'");
    }
  }
  return out;
}

RunConfig build_config(const CommonFlags& f) {
  RunConfig c;
  if (!f.config.empty()) {
    c = load_run_config(f.config);
    if (!f.equilibrium.empty() && parse_equilibrium(f.equilibrium) != c.equilibrium) {
      throw ConfigError("--equilibrium disagrees with the config file");
    }
  } else {
    c = default_config(f.equilibrium.empty() ? EquilibriumChoice::DiseaseFree
                                             : parse_equilibrium(f.equilibrium));
  }
  if (!f.out.empty()) c.output.dir = f.out;
  if (f.seed) c.seed = *f.seed;
  if (f.dt) {
    if (!(*f.dt > 0.0)) throw ConfigError("--dt must be positive");
    c.dt = *f.dt;
  }
  if (f.t_end) {
    if (!(*f.t_end > 0.0)) throw ConfigError("--t-end must be positive");
    c.t_end = *f.t_end;
  }
  if (!f.levels.empty()) c.levels = parse_levels(f.levels);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov certification tools for the SIR model with demography"};
  app.require_subcommand(1);

  CommonFlags flags;
  using Cmd = int (*)(const RunConfig&, std::ostream&);
  const std::pair<const char*, Cmd> commands[] = {
      {"equilibria", cmd_equilibria},
      {"simulate", cmd_simulate},
      {"certify", cmd_certify},
      {"levelsets", cmd_levelsets},
      {"params", cmd_params},
  };
  const char* help[] = {
      "print R0, regime and equilibria",
      "integrate the model and write trajectory.csv",
      "run the verification suite and write report.json",
      "write level-set contours for the figures",
      "print the selected Lyapunov constants and feasibility",
  };
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i].first, help[i]);
    add_common(sub, flags);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (!subs[i]->parsed()) continue;
    const Cmd cmd = commands[i].second;
    return run_guarded([&] { return cmd(build_config(flags), std::cout); }, std::cerr);
  }
  return kExitConfig;
}
