#pragma once

#include <optional>
#include <string_view>

#include "sirlyap/model.hpp"

namespace sirlyap {

/// Constants of the piecewise-linear Lyapunov function around the
/// disease-free equilibrium.
struct DfLyapParams {
  double mu0{};
  double eps{};
  double gamma0{};
  double lambda3{};
  double delta{0.5};

  bool operator==(const DfLyapParams&) const = default;
};

struct DfOverrides {
  std::optional<double> mu0;
  std::optional<double> eps;
  std::optional<double> delta;

  bool operator==(const DfOverrides&) const = default;
};

/// Open interval of admissible eps values.
struct EpsInterval {
  double lo{};
  double hi{};
};
EpsInterval df_eps_interval(const ModelParams& p);

/// Defaults: eps at the midpoint of its interval, mu0 = 0.99·mu, delta = 0.5.
/// Throws RegimeError unless b_hat > 0 and R0 < 1, InfeasibleOverride when an
/// override violates its constraint.
DfLyapParams select_df_params(const ModelParams& p,
                              const DfOverrides& overrides = {});

/// Throws InfeasibleOverride if any invariant of lp fails for p.
void validate(const DfLyapParams& lp, const ModelParams& p);

enum class DfRegion { A, B, C };
std::string_view to_string(DfRegion region);

class DiseaseFreeLyapunov {
 public:
  DiseaseFreeLyapunov(const ModelParams& p, const DfLyapParams& lp);

  const ModelParams& model() const { return p_; }
  const DfLyapParams& params() const { return lp_; }
  const Equilibrium& equilibrium() const { return eq_; }

  /// x̃₁ value of the B/C boundary for given x̃₂, x̃₃.
  double bc_boundary(double x2, double x3) const;

  /// Throws DomainError if x̃₂ < 0 or x̃₃ < 0.
  DfRegion region(const Deviation& dev) const;
  double value(const Deviation& dev) const;

  /// Evaluates the formula of a given region regardless of where dev lies.
  double value_in_region(const Deviation& dev, DfRegion region) const;

  /// Throws OnBoundary within the band 1e-9·(1+‖dev‖) of a region boundary.
  Triple gradient(const Deviation& dev) const;

  /// Distance (in x̃₁) from dev to the closest region boundary.
  double boundary_distance(const Deviation& dev) const;

  /// ISS-Lyapunov threshold |u| / (δ(μ−μ₀)).
  double chi(double u_mag) const;

  /// Decay rate (1−δ)(μ−μ₀) of the ISS implication.
  double decay_rate() const;

  /// −grad·f(x̂+dev, B̂+u) − (1−δ)(μ−μ₀)·V(dev).
  double decrease_slack(const Deviation& dev, double u) const;

  /// grad·f(x̂+dev, B̂+u) in the interior of a region.
  double directional_derivative(const Deviation& dev, double u) const;

  /// Per-region proof bound on grad·f: A: −μV + u, B: −ε̲V, C: −(μ−μ₀)V − μ₀u/(βx̂₁).
  double region_bound(const Deviation& dev, double u) const;

  /// min{ε(γ₀+μ), μ}.
  double eps_underbar() const;

 private:
  ModelParams p_;
  DfLyapParams lp_;
  Equilibrium eq_;
  double c_slope_;  // μ₀/(βx̂₁)
};

}  // namespace sirlyap
