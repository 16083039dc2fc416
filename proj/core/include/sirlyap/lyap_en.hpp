#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "sirlyap/model.hpp"

namespace sirlyap {

/// Constants of the six-region Lyapunov function around the endemic
/// equilibrium. lambda1 must equal lambda2.
struct EnLyapParams {
  double lambda1{1.0};
  double lambda2{1.0};
  double lambda_hat2{};
  double k{};
  double lambda3{};
  double l_bar{};
  double delta{0.5};

  /// λ₂ − kλ₁.
  double lambda0() const { return lambda2 - k * lambda1; }

  bool operator==(const EnLyapParams&) const = default;
};

enum class EnRegion { A, B, C, D, E, F };
enum class X3Sign { NonNeg, Neg };

std::string_view to_string(EnRegion region);

struct EnRegionInfo {
  EnRegion region{};
  X3Sign x3_sign{};
};

struct EnDerivedConstants {
  double gamma_A{};
  double gamma_C{};
  double gamma_D{};
  /// Factor of the region E decrease bound (k included).
  double gamma_E{};
  double gamma_F{};
  double a_B{};
  /// x̂₂ − θ(ω⁻¹(L̄)).
  double c_E{};
};

struct Interval {
  double lo{};
  double hi{};
};

/// Evaluation of the endemic Lyapunov function and its helper functions.
/// The constructor checks the structural constraints (λ₁ = λ₂ > 0, λ̂₂ ≥ 0,
/// 0 < k < 1, λ₃ ≥ 0, L̄ > 0, δ ∈ (0,1)) and that the endemic construction
/// applies to p; feasibility of (k, λ₃, L̄) is checked by feasibility_report.
class EndemicLyapunov {
 public:
  EndemicLyapunov(const ModelParams& p, const EnLyapParams& lp);

  const ModelParams& model() const { return p_; }
  const EnLyapParams& params() const { return lp_; }
  const Equilibrium& equilibrium() const { return eq_; }

  double theta(double s) const;
  double theta_inv(double s) const;
  double omega(double s) const;
  double omega_inv(double v) const;
  double p_fun(double s) const;
  double p_inv(double s) const;
  double p_inv_derivative(double s) const;
  double nu(double s) const;

  bool in_H(const Deviation& dev) const;
  /// dev ∈ [−x̂ᵢ,∞)³, dev ∈ H and V(dev) ≤ level.
  bool in_sublevel(const Deviation& dev, double level) const;

  /// Throws OutOfH.
  EnRegionInfo region(const Deviation& dev) const;
  double value(const Deviation& dev) const;
  /// The Ṽ₁₂ formula of a given region, evaluated regardless of where dev
  /// lies (DomainError if the formula is undefined there).
  double value12_in_region(const Deviation& dev, EnRegion region) const;

  /// Throws OnBoundary near a region boundary or near x̃₃ = 0.
  Triple gradient(const Deviation& dev) const;

  /// Distance-like measure (in x̃₁) from dev to the boundaries of its region.
  double boundary_distance(const Deviation& dev) const;

  /// grad·f(x̂+dev, B̂+u).
  double directional_derivative(const Deviation& dev, double u) const;

  /// Region-wise upper bound on grad·f used by the decrease proof.
  double region_bound(const Deviation& dev, double u) const;

  EnDerivedConstants derived_constants() const;

  /// (−δμP(L̄)/λ₁, δμL̄/λ₁).
  Interval input_range() const;

  /// min over a ∈ [0,l] of P(a) + λ₃(l−a)/(P⁻¹)′(P(a)).
  double eta(double l_total) const;
  /// Smallest l with eta(l) ≥ y; +∞ if y is at or above the supremum.
  double eta_inv(double y) const;

  /// ISS threshold χ(ũ): V ≥ χ implies the decrease with factor (1−δ).
  double chi(double u) const;

 private:
  double x1h_;
  double x2h_;
  ModelParams p_;
  EnLyapParams lp_;
  Equilibrium eq_;
};

/// min of the two k₀ expressions. Throws RegimeError unless R0 > γ/μ+2.
double k0_bound(const ModelParams& p, double lambda1, double lambda2,
                double l_bar);
std::array<double, 2> k0_terms(const ModelParams& p, double lambda1,
                               double lambda2, double l_bar);

struct Lambda3Bound {
  /// The four raw expressions; the third without the factor k.
  std::array<double, 4> raw_terms{};
  /// Third term multiplied by k, as required by the region E estimate.
  double corrected_third{};
  double bound{};
};
Lambda3Bound lambda3_bound(const ModelParams& p, const EnLyapParams& lp);

/// Corner condition: ν(L/λ₀) ≤ θ⁻¹(−L/λ₀) for every L ∈ (0, L̄].
struct CornerConditionResult {
  bool holds{};
  /// min of rhs − lhs over the sampled L ∈ (0, L̄].
  double worst_margin{};
  double argmin_l{};
  /// rhs − lhs at L = 0 (identically zero in exact arithmetic).
  double margin_at_zero{};
};
CornerConditionResult check_corner_condition(const ModelParams& p,
                                             const EnLyapParams& lp,
                                             std::size_t n_samples = 2048);

struct Box {
  Deviation lo;
  Deviation hi;
};

struct EnTarget {
  double l_bar{};
  std::optional<Box> box;
};

/// Geometric shrink search following the existence argument: λ₁ = λ₂ = 1,
/// λ̂₂ = 0.1 and k = 0.9·k₀(L̄) initially, halving until the corner condition holds
/// and the box (if any) lies in Ḡ; λ₃ = 0.5·bound, δ = 0.5.
EnLyapParams select_en_params(const ModelParams& p, const EnTarget& target);

struct FeasibilityReport {
  double k0{};
  Lambda3Bound lambda3{};
  CornerConditionResult corner{};
  Interval input_range{};
  bool k_ok{};
  bool lambda3_ok{};
  bool feasible() const { return k_ok && lambda3_ok && corner.holds; }
};
FeasibilityReport feasibility_report(const ModelParams& p,
                                     const EnLyapParams& lp);

}  // namespace sirlyap
