#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sirlyap/model.hpp"
#include "sirlyap/ode.hpp"
#include "sirlyap/verify.hpp"

namespace sirlyap::cli {

enum class EquilibriumChoice { DiseaseFree, Endemic };

std::string to_string(EquilibriumChoice choice);
/// Accepts "df"/"disease_free" and "endemic"; throws ConfigError otherwise.
EquilibriumChoice parse_equilibrium(const std::string& text);

/// Optional overrides of the Lyapunov constants. The disease-free function
/// reads mu0/eps/delta, the endemic one lambda_hat2/k/l_bar/lambda3/delta.
struct LyapOverrides {
  std::optional<double> mu0;
  std::optional<double> eps;
  std::optional<double> delta;
  std::optional<double> lambda_hat2;
  std::optional<double> k;
  std::optional<double> l_bar;
  std::optional<double> lambda3;

  bool operator==(const LyapOverrides&) const = default;
};

struct OutputConfig {
  std::string dir{"out"};
  std::size_t thin{100};
  bool absolute{false};

  bool operator==(const OutputConfig&) const = default;
};

struct RunConfig {
  ModelParams model{disease_free_example_params()};
  EquilibriumChoice equilibrium{EquilibriumChoice::DiseaseFree};
  LyapOverrides lyapunov{};
  InputSignal signal{ConstantInput{3.0}};
  State initial_state{100.0, 50.0, 0.0};
  double t_end{5000.0};
  double dt{kDefaultDt};
  OutputConfig output{};
  std::vector<double> levels{};
  std::uint64_t seed{kDefaultSeed};

  bool operator==(const RunConfig&) const = default;
};

/// Defaults for a given equilibrium: reference parameter set, constant nominal
/// input, and a start state away from the equilibrium.
RunConfig default_config(EquilibriumChoice choice);

/// Validates and rejects unknown keys (ConfigError).
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

}  // namespace sirlyap::cli
