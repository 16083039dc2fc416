#pragma once

#include <array>
#include <string_view>

namespace sirlyap {

/// Rates of the SIR model with demography. The newborn/immigration rate
/// b_hat is the nominal constant input around which equilibria are taken.
struct ModelParams {
  double beta{};
  double gamma{};
  double mu{};
  double b_hat{};

  /// Throws DomainError unless beta, gamma, mu > 0 and b_hat >= 0.
  void validate() const;

  bool operator==(const ModelParams&) const = default;
};

/// Reference parameter sets used throughout tests, configs and docs.
ModelParams disease_free_example_params();
ModelParams endemic_example_params();

using Triple = std::array<double, 3>;

struct State {
  double s{};
  double i{};
  double r{};

  double total() const { return s + i + r; }
  bool operator==(const State&) const = default;
};

/// x̃ = x − x̂ relative to an equilibrium.
struct Deviation {
  double x1{};
  double x2{};
  double x3{};

  double norm() const;
  Triple as_triple() const { return {x1, x2, x3}; }
  bool operator==(const Deviation&) const = default;
};

enum class EquilibriumKind { DiseaseFree, Endemic };

struct Equilibrium {
  EquilibriumKind kind{};
  State point{};
};

enum class Regime {
  DiseaseFreeStable,
  Boundary,
  EndemicExists,
  EndemicTheoremApplies,
};

std::string_view to_string(Regime regime);
std::string_view to_string(EquilibriumKind kind);

double r0_hat(const ModelParams& p);

/// γ/μ + 2, the threshold above which the endemic Lyapunov construction applies.
double endemic_theorem_threshold(const ModelParams& p);

Equilibrium disease_free_eq(const ModelParams& p);

/// Throws R0NotAboveOne when r0_hat(p) <= 1.
Equilibrium endemic_eq(const ModelParams& p);

/// Vector field of the SIR model at state x with newborn rate b.
Triple rhs(const ModelParams& p, const State& x, double b);

/// Upper bound on S+I+R at time t for any input B(t) in [0, b_max].
double total_population_bound(const State& x0, double b_max,
                              const ModelParams& p, double t);

Regime classify_regime(const ModelParams& p);

Deviation deviation_from(const Equilibrium& eq, const State& x);
State state_from(const Equilibrium& eq, const Deviation& dev);

}  // namespace sirlyap
