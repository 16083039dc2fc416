#include "sirlyap_cli/run_config.hpp"

#include <cmath>
#include <fstream>

#include "sirlyap/errors.hpp"
#include "sirlyap/json_io.hpp"

namespace sirlyap::cli {
namespace {

using nlohmann::json;

double positive_number(const json& j, const char* key) {
  if (!j.at(key).is_number()) throw ConfigError(std::string(key) + " must be a number");
  const double v = j.at(key).get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(key) + " must be positive and finite");
  }
  return v;
}

void read_optional(const json& j, const char* key, std::optional<double>& out) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_number()) {
    throw ConfigError(std::string("lyapunov: '") + key + "' must be a number");
  }
  out = j.at(key).get<double>();
}

void write_optional(json& j, const char* key, const std::optional<double>& v) {
  if (v) j[key] = *v;
}

}  // namespace

std::string to_string(EquilibriumChoice choice) {
  return choice == EquilibriumChoice::DiseaseFree ? "df" : "endemic";
}

EquilibriumChoice parse_equilibrium(const std::string& text) {
  if (text == "df" || text == "disease_free") return EquilibriumChoice::DiseaseFree;
  if (text == "endemic") return EquilibriumChoice::Endemic;
  throw ConfigError("equilibrium must be 'df' or 'endemic', got '" + text + "'");
}

RunConfig default_config(EquilibriumChoice choice) {
  RunConfig c;
  c.equilibrium = choice;
  if (choice == EquilibriumChoice::DiseaseFree) {
    c.model = disease_free_example_params();
    c.initial_state = {100.0, 50.0, 0.0};
  } else {
    c.model = endemic_example_params();
    c.initial_state = {400.0, 100.0, 100.0};
  }
  c.signal = ConstantInput{c.model.b_hat};
  return c;
}

RunConfig parse_run_config(const json& j) {
  require_known_keys(j,
                     {"model", "equilibrium", "lyapunov", "signal", "initial_state",
                      "t_end", "dt", "output", "levels", "seed"},
                     "config");
  EquilibriumChoice choice = EquilibriumChoice::DiseaseFree;
  if (j.contains("equilibrium")) {
    if (!j.at("equilibrium").is_string()) throw ConfigError("equilibrium must be a string");
    choice = parse_equilibrium(j.at("equilibrium").get<std::string>());
  }
  RunConfig c = default_config(choice);
  if (j.contains("model")) {
    c.model = j.at("model").get<ModelParams>();
    try {
      c.model.validate();
    } catch (const DomainError& e) {
      throw ConfigError(std::string("model: ") + e.what());
    }
    c.signal = ConstantInput{c.model.b_hat};
  }
  if (j.contains("lyapunov")) {
    const json& l = j.at("lyapunov");
    require_known_keys(l, {"mu0", "eps", "delta", "lambda_hat2", "k", "l_bar", "lambda3"},
                       "lyapunov");
    read_optional(l, "mu0", c.lyapunov.mu0);
    read_optional(l, "eps", c.lyapunov.eps);
    read_optional(l, "delta", c.lyapunov.delta);
    read_optional(l, "lambda_hat2", c.lyapunov.lambda_hat2);
    read_optional(l, "k", c.lyapunov.k);
    read_optional(l, "l_bar", c.lyapunov.l_bar);
    read_optional(l, "lambda3", c.lyapunov.lambda3);
  }
  if (j.contains("signal")) c.signal = j.at("signal").get<InputSignal>();
  if (j.contains("initial_state")) {
    c.initial_state = j.at("initial_state").get<State>();
    if (!(c.initial_state.s >= 0.0 && c.initial_state.i >= 0.0 && c.initial_state.r >= 0.0)) {
      throw ConfigError("initial_state must be componentwise nonnegative");
    }
  }
  if (j.contains("t_end")) c.t_end = positive_number(j, "t_end");
  if (j.contains("dt")) c.dt = positive_number(j, "dt");
  if (j.contains("output")) {
    const json& o = j.at("output");
    require_known_keys(o, {"dir", "thin", "absolute"}, "output");
    if (o.contains("dir")) {
      if (!o.at("dir").is_string()) throw ConfigError("output.dir must be a string");
      c.output.dir = o.at("dir").get<std::string>();
    }
    if (o.contains("thin")) {
      if (!o.at("thin").is_number_unsigned() || o.at("thin").get<std::size_t>() == 0) {
        throw ConfigError("output.thin must be a positive integer");
      }
      c.output.thin = o.at("thin").get<std::size_t>();
    }
    if (o.contains("absolute")) {
      if (!o.at("absolute").is_boolean()) throw ConfigError("output.absolute must be a boolean");
      c.output.absolute = o.at("absolute").get<bool>();
    }
  }
  if (j.contains("levels")) {
    const json& lv = j.at("levels");
    if (!lv.is_array()) throw ConfigError("levels must be an array of numbers");
    for (const json& v : lv) {
      if (!v.is_number() || v.get<double>() < 0.0) {
        throw ConfigError("levels must be nonnegative numbers");
      }
      c.levels.push_back(v.get<double>());
    }
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ConfigError("seed must be an unsigned integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
  }
  try {
    return parse_run_config(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
}

json to_json(const RunConfig& c) {
  json lyap = json::object();
  write_optional(lyap, "mu0", c.lyapunov.mu0);
  write_optional(lyap, "eps", c.lyapunov.eps);
  write_optional(lyap, "delta", c.lyapunov.delta);
  write_optional(lyap, "lambda_hat2", c.lyapunov.lambda_hat2);
  write_optional(lyap, "k", c.lyapunov.k);
  write_optional(lyap, "l_bar", c.lyapunov.l_bar);
  write_optional(lyap, "lambda3", c.lyapunov.lambda3);
  json j{{"model", c.model},
         {"equilibrium", to_string(c.equilibrium)},
         {"lyapunov", lyap},
         {"signal", c.signal},
         {"initial_state", c.initial_state},
         {"t_end", c.t_end},
         {"dt", c.dt},
         {"output",
          {{"dir", c.output.dir}, {"thin", c.output.thin}, {"absolute", c.output.absolute}}},
         {"levels", c.levels},
         {"seed", c.seed}};
  return j;
}

}  // namespace sirlyap::cli
