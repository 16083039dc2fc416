#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "sirlyap/lyap_df.hpp"
#include "sirlyap/lyap_en.hpp"
#include "sirlyap/model.hpp"
#include "sirlyap/ode.hpp"

namespace sirlyap {

constexpr std::uint64_t kDefaultSeed = 0x5121;

/// Tolerance of checks that need a strictly positive margin.
constexpr double kStrictTolerance = -std::numeric_limits<double>::denorm_min();

/// Where the worst margin of a check was attained.
using Location = std::variant<std::monostate, Deviation, double>;

/// A check passes iff worst_margin >= -tolerance. Strict checks declare a
/// negative tolerance (the smallest subnormal), i.e. they need a positive
/// margin.
struct CheckResult {
  std::string name;
  bool passed{};
  double worst_margin{};
  double tolerance{};
  Location worst_location{};
  std::size_t samples{};
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
};

/// Prints the name/pass/margin/location table.
std::string format_table(const VerificationReport& report);

using LyapunovFunction = std::variant<DiseaseFreeLyapunov, EndemicLyapunov>;

double lyap_value(const LyapunovFunction& lyap, const Deviation& dev);
const Equilibrium& lyap_equilibrium(const LyapunovFunction& lyap);
const ModelParams& lyap_model(const LyapunovFunction& lyap);

/// Forward-difference decay requirement D⁺V ≤ −rate·V, enforced while
/// V ≥ v_floor.
struct DecaySpec {
  double rate{};
  double v_floor{1e-6};
};

/// Streaming version of check_dini_along_trajectory, fed one state at a time.
class DiniMonitor {
 public:
  DiniMonitor(const LyapunovFunction& lyap, DecaySpec spec);

  void feed(double t, const State& x);
  CheckResult result(std::string name) const;
  double last_value() const { return last_v_; }

 private:
  const LyapunovFunction& lyap_;
  DecaySpec spec_;
  bool has_last_{false};
  double last_t_{};
  double last_v_{};
  Deviation last_dev_{};
  double worst_{};
  Location worst_at_{};
  std::size_t samples_{};
  std::size_t non_decreasing_{};
  std::size_t domain_failures_{};
};

/// Throws MismatchedEquilibrium when `anchor` differs from the Lyapunov
/// function's equilibrium.
CheckResult check_dini_along_trajectory(const LyapunovFunction& lyap,
                                        const Trajectory& traj,
                                        const Equilibrium& anchor,
                                        DecaySpec spec);

struct IssOptions {
  State x0{};
  double t_end{};
  double dt{kDefaultDt};
  double tail_fraction{0.2};
};

/// Simulates under `sig` and compares limsup of V over the final part of
/// the horizon with χ(sup|ũ|)·(1+1e-3). For the endemic function, ũ must lie
/// in the admissible input range (RangeError otherwise).
CheckResult check_iss_bound(const LyapunovFunction& lyap,
                            const InputSignal& sig, const IssOptions& opts);

/// Runs step inputs ũ = c and ũ = 2c and checks limsup(2c) ≤ 2χ(c)(1+1e-3).
CheckResult check_iss_gain_linearity(const LyapunovFunction& lyap, double c,
                                     const IssOptions& opts);

/// Trajectory from opts.x0 (which must lie in Ḡ) stays in Ḡ.
CheckResult check_forward_invariance(const EndemicLyapunov& lyap,
                                     const InputSignal& sig,
                                     const IssOptions& opts);

struct BifurcationOptions {
  State x0{100.0, 50.0, 50.0};
  double tol{1e-10};
  double t_max{5e6};
  double dt{0.5};
  double state_rtol{1e-3};
  double threshold_offset{1e-4};
};

CheckResult check_bifurcation_continuity(const ModelParams& p,
                                         const std::vector<double>& c_grid,
                                         const BifurcationOptions& opts = {});

/// Constant inputs spanning [lo·c*, hi·c*] where c* gives R0 = 1.
std::vector<double> bifurcation_grid(const ModelParams& p, std::size_t n = 21,
                                     double lo = 0.5, double hi = 1.5);

enum class NestingAxis { LambdaHat2, K };

struct NestingSpec {
  NestingAxis axis{NestingAxis::LambdaHat2};
  EnLyapParams base{};
  double a{};
  double b{};
  double level{};
  std::size_t samples{10000};
  std::uint64_t seed{kDefaultSeed};
};

CheckResult check_sublevel_nesting(const ModelParams& p,
                                   const NestingSpec& spec);

/// W = −x̃₁ − x̃₂ + |x̃₃| decays at rate μ while in T, and every trajectory
/// enters Ḡ(L̄) before t_end.
CheckResult check_w_region(const EndemicLyapunov& lyap,
                           const std::vector<Deviation>& starts, double t_end,
                           double dt = kDefaultDt);

std::vector<Deviation> sample_w_region_starts(const EndemicLyapunov& lyap,
                                              std::size_t n,
                                              std::uint64_t seed);

CheckResult separability_obstruction_demo(const ModelParams& p);

CheckResult prohibited_region_demo(const ModelParams& p, const State& start,
                                   const std::vector<double>& l_bars,
                                   double t_end, double dt = kDefaultDt);

CheckResult check_df_positive_definite(const DiseaseFreeLyapunov& lyap,
                                       std::size_t n, std::uint64_t seed);
CheckResult check_df_continuity(const DiseaseFreeLyapunov& lyap, std::size_t n,
                                std::uint64_t seed);
/// Implication V ≥ χ(|u|) ⇒ grad·f ≤ −(1−δ)(μ−μ₀)V on an n³ grid.
CheckResult check_df_grid_iss(const DiseaseFreeLyapunov& lyap, std::size_t n,
                              const std::vector<double>& inputs);
/// Per-region decrease bounds on the same grid.
CheckResult check_df_region_bounds(const DiseaseFreeLyapunov& lyap,
                                   std::size_t n,
                                   const std::vector<double>& inputs);
std::vector<double> df_certification_inputs(const ModelParams& p);

/// Uniform rejection samples of Ḡ(L̄) away from the boundary bands.
std::vector<Deviation> sample_sublevel(const EndemicLyapunov& lyap,
                                       std::size_t n, std::uint64_t seed);

CheckResult check_en_positive_definite(const EndemicLyapunov& lyap,
                                       const std::vector<Deviation>& samples);
CheckResult check_en_continuity(const EndemicLyapunov& lyap,
                                std::size_t n_per_boundary, std::uint64_t seed);
CheckResult check_en_strict_decrease(const EndemicLyapunov& lyap,
                                     const std::vector<Deviation>& samples);
CheckResult check_en_region_bounds(const EndemicLyapunov& lyap,
                                   const std::vector<Deviation>& samples);
/// V ≥ χ(u) ⇒ grad·f ≤ −(1−δ)·q(dev) with q the u = 0 region decrease.
CheckResult check_en_iss_implication(const EndemicLyapunov& lyap,
                                     const std::vector<Deviation>& samples,
                                     const std::vector<double>& inputs);
CheckResult check_en_inclusion_in_H(const EndemicLyapunov& lyap,
                                    std::size_t n, std::uint64_t seed);
CheckResult check_en_feasibility(const EndemicLyapunov& lyap);

struct MonotonicityOptions {
  std::size_t n_starts{50};
  std::uint64_t seed{kDefaultSeed};
  double t_end{};
  double dt{kDefaultDt};
  double v_floor{1e-6};
  /// Required distance to the equilibrium at t_end.
  double final_tol{};
};

struct TrajectoryChecks {
  /// Dini decrease along every trajectory.
  CheckResult monotonicity;
  /// Distance to the equilibrium at t_end.
  CheckResult convergence;
};

/// Random starts in the certified domain (Ḡ(L̄) for the endemic function),
/// ũ = 0.
TrajectoryChecks check_trajectories(const LyapunovFunction& lyap,
                                    const MonotonicityOptions& opts);

struct SuiteOptions {
  std::uint64_t seed{kDefaultSeed};
  double dt{kDefaultDt};
  /// 0 selects 50/μ.
  double t_end{0.0};
  std::size_t n_trajectories{50};
  std::size_t grid_n{60};
  std::size_t en_samples{100000};
  std::size_t nesting_samples{10000};
};

VerificationReport certify_disease_free(const DiseaseFreeLyapunov& lyap,
                                        const SuiteOptions& opts = {});
VerificationReport certify_endemic(const EndemicLyapunov& lyap,
                                   const SuiteOptions& opts = {});

}  // namespace sirlyap
