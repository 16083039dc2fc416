#include "sirlyap/lyap_df.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sirlyap/errors.hpp"

namespace sirlyap {

EpsInterval df_eps_interval(const ModelParams& p) {
  const double r0 = r0_hat(p);
  return {std::max(p.mu / (p.gamma + p.mu) - r0, 0.0), 1.0 - r0};
}

std::string_view to_string(DfRegion region) {
  switch (region) {
    case DfRegion::A:
      return "A";
    case DfRegion::B:
      return "B";
    case DfRegion::C:
      return "C";
  }
  return "?";
}

DfLyapParams select_df_params(const ModelParams& p,
                              const DfOverrides& overrides) {
  p.validate();
  if (!(p.b_hat > 0.0)) {
    throw RegimeError("disease-free Lyapunov function requires b_hat > 0");
  }
  if (!(r0_hat(p) < 1.0)) {
    throw RegimeError("disease-free Lyapunov function requires R0 < 1, got " +
                      std::to_string(r0_hat(p)));
  }
  const EpsInterval interval = df_eps_interval(p);

  DfLyapParams lp;
  lp.mu0 = overrides.mu0.value_or(0.99 * p.mu);
  lp.eps = overrides.eps.value_or(0.5 * (interval.lo + interval.hi));
  lp.delta = overrides.delta.value_or(0.5);
  if (!(lp.mu0 > 0.0 && lp.mu0 < p.mu)) {
    throw InfeasibleOverride("mu0 must lie in (0, mu)");
  }
  if (!(lp.eps > interval.lo && lp.eps < interval.hi)) {
    throw InfeasibleOverride("eps must lie in the open interval (" +
                             std::to_string(interval.lo) + ", " +
                             std::to_string(interval.hi) + ")");
  }
  if (!(lp.delta > 0.0 && lp.delta < 1.0)) {
    throw InfeasibleOverride("delta must lie in (0, 1)");
  }
  lp.gamma0 = (p.gamma + p.mu) * (r0_hat(p) + lp.eps) - p.mu;
  lp.lambda3 = 1.0 - lp.gamma0 / p.gamma;
  validate(lp, p);
  return lp;
}

void validate(const DfLyapParams& lp, const ModelParams& p) {
  p.validate();
  const EpsInterval interval = df_eps_interval(p);
  if (!(lp.mu0 > 0.0 && lp.mu0 < p.mu)) {
    throw InfeasibleOverride("mu0 must lie in (0, mu)");
  }
  if (!(lp.eps > interval.lo && lp.eps < interval.hi)) {
    throw InfeasibleOverride("eps outside its admissible interval");
  }
  if (!(lp.gamma0 > 0.0 && lp.gamma0 < p.gamma)) {
    throw InfeasibleOverride("gamma0 must lie in (0, gamma)");
  }
  const double expected_gamma0 = (p.gamma + p.mu) * (r0_hat(p) + lp.eps) - p.mu;
  if (std::abs(lp.gamma0 - expected_gamma0) > 1e-12 * std::abs(expected_gamma0)) {
    throw InfeasibleOverride("gamma0 inconsistent with eps");
  }
  if (!(lp.lambda3 > 0.0) ||
      std::abs(lp.lambda3 - (1.0 - lp.gamma0 / p.gamma)) > 1e-12) {
    throw InfeasibleOverride("lambda3 must equal 1 - gamma0/gamma > 0");
  }
  if (!(lp.delta > 0.0 && lp.delta < 1.0)) {
    throw InfeasibleOverride("delta must lie in (0, 1)");
  }
}

DiseaseFreeLyapunov::DiseaseFreeLyapunov(const ModelParams& p,
                                         const DfLyapParams& lp)
    : p_(p), lp_(lp), eq_(disease_free_eq(p)) {
  validate(lp_, p_);
  if (!(eq_.point.s > 0.0)) {
    throw RegimeError("disease-free Lyapunov function requires b_hat > 0");
  }
  c_slope_ = lp_.mu0 / (p_.beta * eq_.point.s);
}

double DiseaseFreeLyapunov::bc_boundary(double x2, double x3) const {
  return -(x2 + lp_.lambda3 * x3) / c_slope_;
}

DfRegion DiseaseFreeLyapunov::region(const Deviation& dev) const {
  if (dev.x2 < 0.0 || dev.x3 < 0.0) {
    throw DomainError("disease-free deviations need x2 >= 0 and x3 >= 0");
  }
  if (dev.x1 >= 0.0) return DfRegion::A;
  if (dev.x1 >= bc_boundary(dev.x2, dev.x3)) return DfRegion::B;
  return DfRegion::C;
}

double DiseaseFreeLyapunov::value_in_region(const Deviation& dev,
                                            DfRegion region) const {
  switch (region) {
    case DfRegion::A:
      return dev.x1 + dev.x2 + lp_.lambda3 * dev.x3;
    case DfRegion::B:
      return dev.x2 + lp_.lambda3 * dev.x3;
    case DfRegion::C:
      return -c_slope_ * dev.x1;
  }
  return 0.0;
}

double DiseaseFreeLyapunov::value(const Deviation& dev) const {
  return value_in_region(dev, region(dev));
}

double DiseaseFreeLyapunov::boundary_distance(const Deviation& dev) const {
  return std::min(std::abs(dev.x1), std::abs(dev.x1 - bc_boundary(dev.x2, dev.x3)));
}

Triple DiseaseFreeLyapunov::gradient(const Deviation& dev) const {
  const DfRegion r = region(dev);
  if (boundary_distance(dev) <= 1e-9 * (1.0 + dev.norm())) {
    throw OnBoundary("deviation lies within the boundary band of the region partition");
  }
  switch (r) {
    case DfRegion::A:
      return {1.0, 1.0, lp_.lambda3};
    case DfRegion::B:
      return {0.0, 1.0, lp_.lambda3};
    case DfRegion::C:
      return {-c_slope_, 0.0, 0.0};
  }
  return {};
}

double DiseaseFreeLyapunov::chi(double u_mag) const {
  return std::abs(u_mag) / (lp_.delta * (p_.mu - lp_.mu0));
}

double DiseaseFreeLyapunov::decay_rate() const {
  return (1.0 - lp_.delta) * (p_.mu - lp_.mu0);
}

double DiseaseFreeLyapunov::eps_underbar() const {
  return std::min(lp_.eps * (lp_.gamma0 + p_.mu), p_.mu);
}

double DiseaseFreeLyapunov::directional_derivative(const Deviation& dev,
                                                   double u) const {
  const Triple g = gradient(dev);
  const Triple f = rhs(p_, state_from(eq_, dev), p_.b_hat + u);
  return g[0] * f[0] + g[1] * f[1] + g[2] * f[2];
}

double DiseaseFreeLyapunov::decrease_slack(const Deviation& dev, double u) const {
  if (dev == Deviation{} && u == 0.0) return 0.0;
  return -directional_derivative(dev, u) - decay_rate() * value(dev);
}

double DiseaseFreeLyapunov::region_bound(const Deviation& dev, double u) const {
  const double v = value(dev);
  switch (region(dev)) {
    case DfRegion::A:
      return -p_.mu * v + u;
    case DfRegion::B:
      return -eps_underbar() * v;
    case DfRegion::C:
      return -(p_.mu - lp_.mu0) * v - c_slope_ * u;
  }
  return 0.0;
}

}  // namespace sirlyap
