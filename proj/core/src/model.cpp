#include "sirlyap/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sirlyap/errors.hpp"

namespace sirlyap {
namespace {

constexpr double kRegimeRelTol = 1e-12;

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= kRegimeRelTol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

void ModelParams::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("beta must be positive and finite");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("gamma must be positive and finite");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw DomainError("mu must be positive and finite");
  }
  if (!(b_hat >= 0.0) || !std::isfinite(b_hat)) {
    throw DomainError("b_hat must be nonnegative and finite");
  }
}

ModelParams disease_free_example_params() {
  return {.beta = 0.0002, .gamma = 0.032, .mu = 0.015, .b_hat = 3.0};
}

ModelParams endemic_example_params() {
  return {.beta = 0.0002, .gamma = 0.032, .mu = 0.015, .b_hat = 17.0};
}

double Deviation::norm() const { return std::sqrt(x1 * x1 + x2 * x2 + x3 * x3); }

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::DiseaseFreeStable:
      return "DiseaseFreeStable";
    case Regime::Boundary:
      return "Boundary";
    case Regime::EndemicExists:
      return "EndemicExists";
    case Regime::EndemicTheoremApplies:
      return "EndemicTheoremApplies";
  }
  return "?";
}

std::string_view to_string(EquilibriumKind kind) {
  return kind == EquilibriumKind::DiseaseFree ? "disease_free" : "endemic";
}

double r0_hat(const ModelParams& p) {
  return p.beta * p.b_hat / (p.mu * (p.gamma + p.mu));
}

double endemic_theorem_threshold(const ModelParams& p) {
  return p.gamma / p.mu + 2.0;
}

Equilibrium disease_free_eq(const ModelParams& p) {
  return {EquilibriumKind::DiseaseFree, State{p.b_hat / p.mu, 0.0, 0.0}};
}

Equilibrium endemic_eq(const ModelParams& p) {
  const double r0 = r0_hat(p);
  if (!(r0 > 1.0) || nearly_equal(r0, 1.0)) {
    throw R0NotAboveOne("endemic equilibrium requires R0 > 1, got " +
                        std::to_string(r0));
  }
  const State point{(p.gamma + p.mu) / p.beta, p.mu * (r0 - 1.0) / p.beta,
                    p.gamma * (r0 - 1.0) / p.beta};
  return {EquilibriumKind::Endemic, point};
}

Triple rhs(const ModelParams& p, const State& x, double b) {
  const double infection = p.beta * x.i * x.s;
  return {b - p.mu * x.s - infection, infection - (p.gamma + p.mu) * x.i,
          p.gamma * x.i - p.mu * x.r};
}

// The exact solution of N' = B - mu N is bounded by
// e^{-mu t} N(0) + (1 - e^{-mu t}) b_max / mu.
double total_population_bound(const State& x0, double b_max,
                              const ModelParams& p, double t) {
  if (t < 0.0) {
    throw DomainError("total_population_bound requires t >= 0");
  }
  return std::exp(-p.mu * t) * x0.total() + b_max / p.mu;
}

Regime classify_regime(const ModelParams& p) {
  const double r0 = r0_hat(p);
  if (nearly_equal(r0, 1.0)) return Regime::Boundary;
  if (r0 < 1.0) return Regime::DiseaseFreeStable;
  const double threshold = endemic_theorem_threshold(p);
  if (r0 > threshold && !nearly_equal(r0, threshold)) {
    return Regime::EndemicTheoremApplies;
  }
  return Regime::EndemicExists;
}

Deviation deviation_from(const Equilibrium& eq, const State& x) {
  return {x.s - eq.point.s, x.i - eq.point.i, x.r - eq.point.r};
}

State state_from(const Equilibrium& eq, const Deviation& dev) {
  return {eq.point.s + dev.x1, eq.point.i + dev.x2, eq.point.r + dev.x3};
}

}  // namespace sirlyap
