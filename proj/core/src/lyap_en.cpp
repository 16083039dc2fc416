#include "sirlyap/lyap_en.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sirlyap/errors.hpp"

namespace sirlyap {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double band(const Deviation& dev) { return 1e-9 * (1.0 + dev.norm()); }

}  // namespace

std::string_view to_string(EnRegion region) {
  switch (region) {
    case EnRegion::A:
      return "A";
    case EnRegion::B:
      return "B";
    case EnRegion::C:
      return "C";
    case EnRegion::D:
      return "D";
    case EnRegion::E:
      return "E";
    case EnRegion::F:
      return "F";
  }
  return "?";
}

EndemicLyapunov::EndemicLyapunov(const ModelParams& p, const EnLyapParams& lp)
    : p_(p), lp_(lp) {
  p_.validate();
  if (classify_regime(p_) != Regime::EndemicTheoremApplies) {
    throw RegimeError("endemic Lyapunov function requires R0 > gamma/mu + 2 (R0 = " +
                      std::to_string(r0_hat(p_)) + ", threshold " +
                      std::to_string(endemic_theorem_threshold(p_)) + ")");
  }
  if (!(lp_.lambda1 > 0.0) ||
      std::abs(lp_.lambda1 - lp_.lambda2) > 1e-12 * lp_.lambda1) {
    throw InfeasibleOverride("lambda1 and lambda2 must be equal and positive");
  }
  if (!(lp_.lambda_hat2 >= 0.0)) {
    throw InfeasibleOverride("lambda_hat2 must be nonnegative");
  }
  if (!(lp_.k > 0.0 && lp_.k < 1.0)) {
    throw InfeasibleOverride("k must lie in (0, 1)");
  }
  if (!(lp_.lambda3 >= 0.0)) {
    throw InfeasibleOverride("lambda3 must be nonnegative");
  }
  if (!(lp_.l_bar > 0.0) || !std::isfinite(lp_.l_bar)) {
    throw InfeasibleOverride("l_bar must be positive");
  }
  if (!(lp_.delta > 0.0 && lp_.delta < 1.0)) {
    throw InfeasibleOverride("delta must lie in (0, 1)");
  }
  eq_ = endemic_eq(p_);
  x1h_ = eq_.point.s;
  x2h_ = eq_.point.i;
}

double EndemicLyapunov::theta(double s) const {
  if (!(s > -x1h_)) throw DomainError("theta: argument must exceed -x1_hat");
  return x2h_ * s / (x1h_ + s);
}

double EndemicLyapunov::theta_inv(double s) const {
  if (!(s < x2h_)) throw DomainError("theta_inv: argument must be below x2_hat");
  return x1h_ * s / (x2h_ - s);
}

double EndemicLyapunov::omega(double s) const {
  return lp_.lambda1 * s + lp_.lambda_hat2 * theta(s);
}

double EndemicLyapunov::omega_inv(double v) const {
  if (v == 0.0) return 0.0;
  const double l1 = lp_.lambda1;
  const double lh = lp_.lambda_hat2;
  if (lh == 0.0) {
    if (!(v > -l1 * x1h_)) {
      throw DomainError("omega_inv: value outside the range of omega");
    }
    return v / l1;
  }
  double lo;
  double hi;
  if (v > 0.0) {
    lo = std::max(0.0, (v - lh * x2h_) / l1);
    hi = v / l1;
  } else {
    hi = 0.0;
    if (v / l1 > -x1h_) {
      lo = v / l1;
    } else {
      double gap = x1h_;
      lo = -x1h_ + gap;
      while (omega(lo) > v) {
        gap *= 0.5;
        lo = -x1h_ + gap;
        if (gap == 0.0 || lo == -x1h_) {
          throw DomainError("omega_inv: bracket collapsed onto the pole");
        }
      }
    }
  }

  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double residual = omega(s) - v;
    if (residual == 0.0) return s;
    if (residual < 0.0) {
      lo = s;
    } else {
      hi = s;
    }
    const double denom = x1h_ + s;
    const double slope = l1 + lh * x1h_ * x2h_ / (denom * denom);
    double next = s - residual / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - s);
    s = next;
    if (step <= 1e-15 * std::abs(s) ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                       std::max(std::abs(lo), std::abs(hi))) {
      return s;
    }
  }
  return s;
}

double EndemicLyapunov::p_fun(double s) const {
  return lp_.lambda0() * theta(omega_inv(s));
}

double EndemicLyapunov::p_inv(double s) const {
  const double l0 = lp_.lambda0();
  if (!(s < l0 * x2h_)) {
    throw DomainError("p_inv: argument must be below (lambda2 - k lambda1) x2_hat");
  }
  return lp_.lambda1 * theta_inv(s / l0) + lp_.lambda_hat2 * s / l0;
}

double EndemicLyapunov::p_inv_derivative(double s) const {
  const double l0 = lp_.lambda0();
  if (!(s < l0 * x2h_)) {
    throw DomainError("p_inv_derivative: argument must be below (lambda2 - k lambda1) x2_hat");
  }
  const double d = l0 * x2h_ - s;
  return (lp_.lambda1 * l0 * l0 * x1h_ * x2h_ / (d * d) + lp_.lambda_hat2) / l0;
}

double EndemicLyapunov::nu(double s) const {
  return (lp_.lambda_hat2 * s - p_fun(lp_.lambda0() * s)) / lp_.lambda1;
}

bool EndemicLyapunov::in_H(const Deviation& dev) const {
  const double one_minus_k = 1.0 - lp_.k;
  return dev.x2 > -x2h_ && dev.x2 <= lp_.l_bar / (lp_.lambda2 * one_minus_k) &&
         -dev.x1 - dev.x2 < one_minus_k * x2h_ &&
         -lp_.lambda1 * dev.x1 + lp_.lambda_hat2 * dev.x2 <
             lp_.lambda2 * one_minus_k * x2h_;
}

bool EndemicLyapunov::in_sublevel(const Deviation& dev, double level) const {
  if (dev.x1 < -eq_.point.s || dev.x2 < -eq_.point.i || dev.x3 < -eq_.point.r) {
    return false;
  }
  if (!in_H(dev)) return false;
  return value(dev) <= level;
}

EnRegionInfo EndemicLyapunov::region(const Deviation& dev) const {
  if (!in_H(dev)) throw OutOfH("deviation lies outside H");
  EnRegionInfo info;
  info.x3_sign = dev.x3 < 0.0 ? X3Sign::Neg : X3Sign::NonNeg;
  const double k = lp_.k;
  if (dev.x2 >= 0.0) {
    if (dev.x1 >= -k * dev.x2) {
      info.region = EnRegion::A;
    } else if (dev.x1 >= nu(dev.x2)) {
      info.region = EnRegion::B;
    } else {
      info.region = EnRegion::C;
    }
  } else {
    if (dev.x1 <= -k * dev.x2) {
      info.region = EnRegion::D;
    } else if (dev.x1 <= theta_inv(-dev.x2)) {
      info.region = EnRegion::E;
    } else {
      info.region = EnRegion::F;
    }
  }
  return info;
}

double EndemicLyapunov::value12_in_region(const Deviation& dev,
                                          EnRegion region) const {
  const double l1 = lp_.lambda1;
  const double l2 = lp_.lambda2;
  const double lh = lp_.lambda_hat2;
  switch (region) {
    case EnRegion::A:
      return l1 * dev.x1 + l2 * dev.x2;
    case EnRegion::B:
      return lp_.lambda0() * dev.x2;
    case EnRegion::C:
      return p_inv(-l1 * dev.x1 + lh * dev.x2);
    case EnRegion::D:
      return p_inv(-l1 * dev.x1 - l2 * dev.x2);
    case EnRegion::E:
      return p_inv(-lp_.lambda0() * dev.x2);
    case EnRegion::F:
      return l1 * dev.x1 - lh * dev.x2;
  }
  return 0.0;
}

double EndemicLyapunov::value(const Deviation& dev) const {
  const EnRegionInfo info = region(dev);
  return value12_in_region(dev, info.region) + lp_.lambda3 * std::abs(dev.x3);
}

double EndemicLyapunov::boundary_distance(const Deviation& dev) const {
  double d = std::min(std::abs(dev.x2), std::abs(dev.x1 + lp_.k * dev.x2));
  if (dev.x2 >= 0.0) {
    d = std::min(d, std::abs(dev.x1 - nu(dev.x2)));
  } else {
    d = std::min(d, std::abs(dev.x1 - theta_inv(-dev.x2)));
  }
  return d;
}

Triple EndemicLyapunov::gradient(const Deviation& dev) const {
  const EnRegionInfo info = region(dev);
  const double tau = band(dev);
  if (std::abs(dev.x3) <= tau || boundary_distance(dev) <= tau) {
    throw OnBoundary("deviation lies within the boundary band of the region partition");
  }
  const double l1 = lp_.lambda1;
  const double l2 = lp_.lambda2;
  const double lh = lp_.lambda_hat2;
  const double l0 = lp_.lambda0();
  const double g3 = dev.x3 > 0.0 ? lp_.lambda3 : -lp_.lambda3;
  switch (info.region) {
    case EnRegion::A:
      return {l1, l2, g3};
    case EnRegion::B:
      return {0.0, l0, g3};
    case EnRegion::C: {
      const double d = p_inv_derivative(-l1 * dev.x1 + lh * dev.x2);
      return {-l1 * d, lh * d, g3};
    }
    case EnRegion::D: {
      const double d = p_inv_derivative(-l1 * dev.x1 - l2 * dev.x2);
      return {-l1 * d, -l2 * d, g3};
    }
    case EnRegion::E:
      return {0.0, -l0 * p_inv_derivative(-l0 * dev.x2), g3};
    case EnRegion::F:
      return {l1, -lh, g3};
  }
  return {};
}

double EndemicLyapunov::directional_derivative(const Deviation& dev,
                                               double u) const {
  const Triple g = gradient(dev);
  const Triple f = rhs(p_, state_from(eq_, dev), p_.b_hat + u);
  return g[0] * f[0] + g[1] * f[1] + g[2] * f[2];
}

EnDerivedConstants EndemicLyapunov::derived_constants() const {
  const double g = p_.gamma;
  const double l3 = lp_.lambda3;
  const double lh = lp_.lambda_hat2;
  const double l0 = lp_.lambda0();
  EnDerivedConstants c;
  c.gamma_A = g * (1.0 - l3 / lp_.lambda2);
  c.gamma_C = g * (1.0 - l3 * l0 / (lh * lh));
  c.gamma_D = g * (1.0 - l3 * l0 / (lp_.lambda2 * lh));
  c.gamma_F = g * (1.0 - l3 / lh);
  c.c_E = x2h_ - theta(omega_inv(lp_.l_bar));
  c.gamma_E = 1.0 - l3 * g / (lh * lp_.k * c.c_E * p_.beta);
  c.a_B = std::min(lp_.k * p_.mu * (r0_hat(p_) - 1.0) - l3 * g / l0, p_.mu);
  return c;
}

double EndemicLyapunov::region_bound(const Deviation& dev, double u) const {
  const EnRegionInfo info = region(dev);
  const double l1 = lp_.lambda1;
  const double l2 = lp_.lambda2;
  const double lh = lp_.lambda_hat2;
  const double l0 = lp_.lambda0();
  const double mu = p_.mu;
  const double v3 = lp_.lambda3 * std::abs(dev.x3);
  switch (info.region) {
    case EnRegion::A:
    case EnRegion::F:
      return -mu * value(dev) + l1 * u;
    case EnRegion::B:
      return -derived_constants().a_B * value(dev);
    case EnRegion::C: {
      const double v = -l1 * dev.x1 + lh * dev.x2;
      return p_inv_derivative(v) * (-mu * v - l1 * u) - mu * v3;
    }
    case EnRegion::D: {
      const double w = -l1 * dev.x1 - l2 * dev.x2;
      return p_inv_derivative(w) * (-mu * w - l1 * u) - mu * v3;
    }
    case EnRegion::E: {
      const EnDerivedConstants c = derived_constants();
      const double z = -l0 * dev.x2;
      const double factor = info.x3_sign == X3Sign::Neg ? c.gamma_E : 1.0;
      return -p_inv_derivative(z) * lp_.k * c.c_E * p_.beta * factor * z -
             mu * v3;
    }
  }
  return 0.0;
}

Interval EndemicLyapunov::input_range() const {
  const double scale = lp_.delta * p_.mu / lp_.lambda1;
  return {-scale * p_fun(lp_.l_bar), scale * lp_.l_bar};
}

double EndemicLyapunov::eta(double l_total) const {
  if (!(l_total > 0.0)) return 0.0;
  auto objective = [&](double a) {
    const double pa = p_fun(a);
    if (!(pa < lp_.lambda0() * x2h_)) return pa;
    return pa + lp_.lambda3 * (l_total - a) / p_inv_derivative(pa);
  };
  constexpr int kScan = 64;
  double best = kInf;
  int best_i = 0;
  for (int i = 0; i <= kScan; ++i) {
    const double a = l_total * static_cast<double>(i) / kScan;
    const double g = objective(a);
    if (g < best) {
      best = g;
      best_i = i;
    }
  }
  double lo = l_total * static_cast<double>(std::max(best_i - 1, 0)) / kScan;
  double hi = l_total * static_cast<double>(std::min(best_i + 1, kScan)) / kScan;
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - ratio * (hi - lo);
  double b = lo + ratio * (hi - lo);
  double fa = objective(a);
  double fb = objective(b);
  while (hi - lo > 1e-10 * std::max(l_total, 1e-300)) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - ratio * (hi - lo);
      fa = objective(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + ratio * (hi - lo);
      fb = objective(b);
    }
  }
  return std::min({best, fa, fb});
}

double EndemicLyapunov::eta_inv(double y) const {
  if (!(y > 0.0)) return 0.0;
  double lo = 0.0;
  double hi = std::max(1.0, y);
  while (eta(hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return kInf;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (eta(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

double EndemicLyapunov::chi(double u) const {
  const double scaled = lp_.lambda1 * std::abs(u) / (lp_.delta * p_.mu);
  if (u >= 0.0) return scaled;
  return eta_inv(scaled);
}

std::array<double, 2> k0_terms(const ModelParams& p, double lambda1,
                               double lambda2, double l_bar) {
  p.validate();
  if (classify_regime(p) != Regime::EndemicTheoremApplies) {
    throw RegimeError("k0 requires R0 > gamma/mu + 2");
  }
  const Equilibrium eq = endemic_eq(p);
  const double x1h = eq.point.s;
  const double x2h = eq.point.i;
  const double first = 1.0 - (p.gamma + p.mu) / (p.mu * (r0_hat(p) - 1.0));
  const double s = -l_bar / lambda2;
  const double ti = x1h * s / (x2h - s);
  const double second = lambda2 * ti / (lambda1 * ti - l_bar);
  return {first, second};
}

double k0_bound(const ModelParams& p, double lambda1, double lambda2,
                double l_bar) {
  const auto terms = k0_terms(p, lambda1, lambda2, l_bar);
  return std::min(terms[0], terms[1]);
}

Lambda3Bound lambda3_bound(const ModelParams& p, const EnLyapParams& lp) {
  const EndemicLyapunov v(p, lp);
  const double k = lp.k;
  const double lh = lp.lambda_hat2;
  const double c_e = v.derived_constants().c_E;
  Lambda3Bound out;
  out.raw_terms = {
      k * p.mu * lp.lambda1 * (r0_hat(p) - 1.0) * (1.0 - k) / p.gamma,
      lh * lh / ((1.0 - k) * lp.lambda1),
      p.beta * lh * c_e / p.gamma,
      lh,
  };
  out.corrected_third = k * out.raw_terms[2];
  out.bound = std::min({out.raw_terms[0], out.raw_terms[1],
                        out.corrected_third, out.raw_terms[3]});
  return out;
}

CornerConditionResult check_corner_condition(const ModelParams& p,
                                             const EnLyapParams& lp,
                                             std::size_t n_samples) {
  const EndemicLyapunov v(p, lp);
  if (n_samples == 0) n_samples = 1;
  const double l0 = lp.lambda0();
  CornerConditionResult out;
  out.holds = true;
  out.worst_margin = kInf;
  for (std::size_t j = 0; j <= n_samples; ++j) {
    const double l = (j == n_samples)
                         ? lp.l_bar
                         : lp.l_bar * static_cast<double>(j) /
                               static_cast<double>(n_samples);
    const double lhs = v.nu(l / l0);
    const double rhs_value = v.theta_inv(-l / l0);
    const double margin = rhs_value - lhs;
    if (margin < -1e-12 * (1.0 + std::abs(lhs) + std::abs(rhs_value))) {
      out.holds = false;
    }
    if (j == 0) {
      out.margin_at_zero = margin;
    } else if (margin < out.worst_margin) {
      out.worst_margin = margin;
      out.argmin_l = l;
    }
  }
  return out;
}

namespace {

bool box_in_sublevel(const EndemicLyapunov& v, const Box& box, double level) {
  constexpr int kN = 8;
  for (int i = 0; i <= kN; ++i) {
    for (int j = 0; j <= kN; ++j) {
      for (int l = 0; l <= kN; ++l) {
        const Deviation d{
            box.lo.x1 + (box.hi.x1 - box.lo.x1) * i / kN,
            box.lo.x2 + (box.hi.x2 - box.lo.x2) * j / kN,
            box.lo.x3 + (box.hi.x3 - box.lo.x3) * l / kN,
        };
        if (!v.in_sublevel(d, level)) return false;
      }
    }
  }
  return true;
}

}  // namespace

EnLyapParams select_en_params(const ModelParams& p, const EnTarget& target) {
  p.validate();
  if (classify_regime(p) != Regime::EndemicTheoremApplies) {
    throw RegimeError("endemic Lyapunov function requires R0 > gamma/mu + 2");
  }
  if (!(target.l_bar > 0.0)) throw DomainError("target l_bar must be positive");

  EnLyapParams lp;
  lp.lambda1 = 1.0;
  lp.lambda2 = 1.0;
  lp.lambda_hat2 = 0.1;
  lp.k = 0.9 * k0_bound(p, 1.0, 1.0, target.l_bar);
  lp.l_bar = target.l_bar;
  lp.delta = 0.5;
  bool shrink_k_next = true;
  for (int it = 0; it < 64; ++it) {
    lp.lambda3 = 0.0;
    const CornerConditionResult cc = check_corner_condition(p, lp);
    if (!cc.holds || !(cc.worst_margin > 0.0)) {
      lp.lambda_hat2 *= 0.5;
      continue;
    }
    lp.lambda3 = 0.5 * lambda3_bound(p, lp).bound;
    if (!(lp.lambda3 > 0.0)) {
      lp.lambda_hat2 *= 0.5;
      continue;
    }
    if (target.box && !box_in_sublevel(EndemicLyapunov(p, lp), *target.box,
                                       target.l_bar)) {
      if (shrink_k_next) {
        lp.k *= 0.5;
      } else {
        lp.lambda_hat2 *= 0.5;
      }
      shrink_k_next = !shrink_k_next;
      continue;
    }
    return lp;
  }
  throw NoConvergence("no feasible endemic Lyapunov parameters after 64 shrink steps");
}

FeasibilityReport feasibility_report(const ModelParams& p,
                                     const EnLyapParams& lp) {
  const EndemicLyapunov v(p, lp);
  FeasibilityReport r;
  r.k0 = k0_bound(p, lp.lambda1, lp.lambda2, lp.l_bar);
  r.k_ok = lp.k > 0.0 && lp.k < r.k0 && lp.lambda0() > 0.0;
  r.lambda3 = lambda3_bound(p, lp);
  r.lambda3_ok = lp.lambda3 > 0.0 && lp.lambda3 < r.lambda3.bound;
  r.corner = check_corner_condition(p, lp);
  r.input_range = v.input_range();
  return r;
}

}  // namespace sirlyap
