#pragma once

#include <iosfwd>

#include "sirlyap/lyap_df.hpp"
#include "sirlyap/lyap_en.hpp"
#include "sirlyap_cli/run_config.hpp"

namespace sirlyap::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitRegime = 2,
  kExitCheckFailed = 3,
  kExitNumerical = 4,
};

DfLyapParams df_params_from(const RunConfig& config);
EnLyapParams en_params_from(const RunConfig& config);

/// Default figure levels and windows.
std::vector<double> default_levels(EquilibriumChoice choice);

int cmd_equilibria(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, std::ostream& out);
int cmd_certify(const RunConfig& config, std::ostream& out);
int cmd_levelsets(const RunConfig& config, std::ostream& out);
int cmd_params(const RunConfig& config, std::ostream& out);

/// Runs `fn` and maps library exceptions to exit codes, printing the message
/// to `err`.
template <class Fn>
int run_guarded(Fn&& fn, std::ostream& err);

}  // namespace sirlyap::cli

#include "sirlyap_cli/commands_inl.hpp"
