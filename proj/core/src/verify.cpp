#include "sirlyap/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "sirlyap/errors.hpp"

namespace sirlyap {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double norm3(const Triple& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

double dot3(const Triple& a, const Triple& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double distance(const State& a, const State& b) {
  const double ds = a.s - b.s;
  const double di = a.i - b.i;
  const double dr = a.r - b.r;
  return std::sqrt(ds * ds + di * di + dr * dr);
}

double state_norm(const State& x) { return std::sqrt(x.s * x.s + x.i * x.i + x.r * x.r); }

double band(const Deviation& dev) { return 1e-9 * (1.0 + dev.norm()); }

CheckResult make_result(std::string name, double worst, double tolerance,
                        Location where, std::size_t samples, std::string detail) {
  CheckResult r;
  r.name = std::move(name);
  r.worst_margin = worst;
  r.tolerance = tolerance;
  r.passed = worst >= -tolerance;
  r.worst_location = where;
  r.samples = samples;
  r.detail = std::move(detail);
  return r;
}

class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : rng_(seed) {}
  double operator()(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

 private:
  std::mt19937_64 rng_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

bool same_equilibrium(const Equilibrium& a, const Equilibrium& b) {
  if (a.kind != b.kind) return false;
  return distance(a.point, b.point) <= 1e-9 * (1.0 + state_norm(a.point));
}

double horizon(const ModelParams& p, double t_end) {
  return t_end > 0.0 ? t_end : 50.0 / p.mu;
}

}  // namespace

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

std::string format_table(const VerificationReport& report) {
  std::ostringstream os;
  std::size_t width = 4;
  for (const auto& c : report.checks) width = std::max(width, c.name.size());
  os << std::left << std::setw(static_cast<int>(width)) << "name" << "  "
     << std::setw(4) << "pass" << "  " << std::setw(13) << "margin" << "  "
     << "location\n";
  for (const auto& c : report.checks) {
    std::string where = "-";
    if (const auto* d = std::get_if<Deviation>(&c.worst_location)) {
      where = "dev(" + fmt(d->x1) + ", " + fmt(d->x2) + ", " + fmt(d->x3) + ")";
    } else if (const auto* t = std::get_if<double>(&c.worst_location)) {
      where = "t=" + fmt(*t);
    }
    os << std::left << std::setw(static_cast<int>(width)) << c.name << "  "
       << std::setw(4) << (c.passed ? "yes" : "NO") << "  " << std::setw(13)
       << fmt(c.worst_margin) << "  " << where << '\n';
  }
  return os.str();
}

double lyap_value(const LyapunovFunction& lyap, const Deviation& dev) {
  return std::visit([&](const auto& v) { return v.value(dev); }, lyap);
}

const Equilibrium& lyap_equilibrium(const LyapunovFunction& lyap) {
  return std::visit(
      [](const auto& v) -> const Equilibrium& { return v.equilibrium(); }, lyap);
}

const ModelParams& lyap_model(const LyapunovFunction& lyap) {
  return std::visit([](const auto& v) -> const ModelParams& { return v.model(); },
                    lyap);
}

DiniMonitor::DiniMonitor(const LyapunovFunction& lyap, DecaySpec spec)
    : lyap_(lyap), spec_(spec), worst_(kInf) {}

void DiniMonitor::feed(double t, const State& x) {
  const Deviation dev = deviation_from(lyap_equilibrium(lyap_), x);
  double v;
  try {
    v = lyap_value(lyap_, dev);
  } catch (const Error&) {
    ++domain_failures_;
    worst_ = -kInf;
    worst_at_ = t;
    has_last_ = false;
    return;
  }
  if (has_last_ && t > last_t_ && last_v_ >= spec_.v_floor) {
    const double h = t - last_t_;
    const double dini = (v - last_v_) / h;
    const double margin =
        (-spec_.rate * std::min(last_v_, v) - dini) / (1.0 + last_v_);
    ++samples_;
    if (margin < worst_) {
      worst_ = margin;
      worst_at_ = last_t_;
    }
    if (v >= last_v_) ++non_decreasing_;
  }
  has_last_ = true;
  last_t_ = t;
  last_v_ = v;
  last_dev_ = dev;
}

CheckResult DiniMonitor::result(std::string name) const {
  double worst = samples_ == 0 && domain_failures_ == 0 ? 0.0 : worst_;
  if (non_decreasing_ > 0) worst = std::min(worst, -kInf);
  std::string detail = "forward differences: " + std::to_string(samples_) +
                       ", non-decreasing steps: " +
                       std::to_string(non_decreasing_) +
                       ", evaluation failures: " + std::to_string(domain_failures_);
  return make_result(std::move(name), worst, 1e-6, worst_at_, samples_,
                     std::move(detail));
}

CheckResult check_dini_along_trajectory(const LyapunovFunction& lyap,
                                        const Trajectory& traj,
                                        const Equilibrium& anchor,
                                        DecaySpec spec) {
  if (!same_equilibrium(anchor, lyap_equilibrium(lyap))) {
    throw MismatchedEquilibrium(
        "trajectory anchor does not match the Lyapunov function's equilibrium");
  }
  DiniMonitor monitor(lyap, spec);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    monitor.feed(traj.times[k], traj.states[k]);
  }
  return monitor.result("dini_along_trajectory");
}

namespace {

struct InputDeviation {
  double lo;
  double hi;
};

InputDeviation input_deviation(const LyapunovFunction& lyap,
                               const InputSignal& sig, double t_end) {
  const double b_hat = lyap_model(lyap).b_hat;
  const auto [lo, hi] = input_range(sig, t_end);
  InputDeviation d{lo - b_hat, hi - b_hat};
  if (const auto* en = std::get_if<EndemicLyapunov>(&lyap)) {
    const Interval range = en->input_range();
    if (!(d.lo > range.lo && d.hi < range.hi)) {
      throw RangeError("input deviation [" + fmt(d.lo) + ", " + fmt(d.hi) +
                       "] leaves the admissible range (" + fmt(range.lo) +
                       ", " + fmt(range.hi) + ")");
    }
  }
  return d;
}

double iss_threshold(const LyapunovFunction& lyap, const InputDeviation& d) {
  if (const auto* df = std::get_if<DiseaseFreeLyapunov>(&lyap)) {
    return df->chi(std::max(std::abs(d.lo), std::abs(d.hi)));
  }
  const auto& en = std::get<EndemicLyapunov>(lyap);
  double chi = 0.0;
  if (d.hi > 0.0) chi = std::max(chi, en.chi(d.hi));
  if (d.lo < 0.0) chi = std::max(chi, en.chi(d.lo));
  return chi;
}

struct Limsup {
  double value{};
  double time{};
};

Limsup tail_limsup(const LyapunovFunction& lyap, const InputSignal& sig,
                   const IssOptions& opts) {
  const Equilibrium& eq = lyap_equilibrium(lyap);
  const double t_end = horizon(lyap_model(lyap), opts.t_end);
  const double t_tail = (1.0 - opts.tail_fraction) * t_end;
  Limsup out{-kInf, 0.0};
  integrate_visit(lyap_model(lyap), opts.x0, sig, t_end, opts.dt,
                  [&](double t, const State& x, double) {
                    if (t < t_tail) return true;
                    double v;
                    try {
                      v = lyap_value(lyap, deviation_from(eq, x));
                    } catch (const Error&) {
                      out = {kInf, t};
                      return false;
                    }
                    if (v > out.value) out = {v, t};
                    return true;
                  });
  return out;
}

}  // namespace

CheckResult check_iss_bound(const LyapunovFunction& lyap,
                            const InputSignal& sig, const IssOptions& opts) {
  const double t_end = horizon(lyap_model(lyap), opts.t_end);
  const InputDeviation d = input_deviation(lyap, sig, t_end);
  const double chi = iss_threshold(lyap, d);
  const Limsup ls = tail_limsup(lyap, sig, opts);
  const double allowed = std::max(chi * (1.0 + 1e-3), 1e-6);
  return make_result("iss_bound", allowed - ls.value, 0.0, ls.time, 1,
                     "sup|u| in [" + fmt(d.lo) + ", " + fmt(d.hi) +
                         "], chi = " + fmt(chi) + ", limsup V = " + fmt(ls.value));
}

CheckResult check_iss_gain_linearity(const LyapunovFunction& lyap, double c,
                                     const IssOptions& opts) {
  const double b_hat = lyap_model(lyap).b_hat;
  const InputSignal one = StepInput{0.0, b_hat, b_hat + c};
  const InputSignal two = StepInput{0.0, b_hat, b_hat + 2.0 * c};
  const double t_end = horizon(lyap_model(lyap), opts.t_end);
  const double chi = iss_threshold(lyap, input_deviation(lyap, one, t_end));
  input_deviation(lyap, two, t_end);
  const Limsup ls1 = tail_limsup(lyap, one, opts);
  const Limsup ls2 = tail_limsup(lyap, two, opts);
  const double allowed = std::max(2.0 * chi * (1.0 + 1e-3), 1e-6);
  return make_result("iss_gain_linearity", allowed - ls2.value, 0.0, ls2.time, 2,
                     "c = " + fmt(c) + ", chi(c) = " + fmt(chi) +
                         ", limsup V(c) = " + fmt(ls1.value) +
                         ", limsup V(2c) = " + fmt(ls2.value));
}

CheckResult check_forward_invariance(const EndemicLyapunov& lyap,
                                     const InputSignal& sig,
                                     const IssOptions& opts) {
  const LyapunovFunction wrapped = lyap;
  const double t_end = horizon(lyap.model(), opts.t_end);
  input_deviation(wrapped, sig, t_end);
  const double l_bar = lyap.params().l_bar;
  const Equilibrium& eq = lyap.equilibrium();
  if (!lyap.in_sublevel(deviation_from(eq, opts.x0), l_bar)) {
    throw DomainError("forward invariance check needs a start inside the sublevel set");
  }
  double worst = kInf;
  double where = 0.0;
  std::size_t samples = 0;
  integrate_visit(lyap.model(), opts.x0, sig, t_end, opts.dt,
                  [&](double t, const State& x, double) {
                    ++samples;
                    const Deviation dev = deviation_from(eq, x);
                    double margin = -kInf;
                    if (lyap.in_sublevel(dev, kInf)) {
                      margin = (l_bar - lyap.value(dev)) / (1.0 + l_bar);
                    }
                    if (margin < worst) {
                      worst = margin;
                      where = t;
                    }
                    return margin >= -1e-12;
                  });
  return make_result("forward_invariance", worst, 1e-12, where, samples,
                     "states checked against V <= " + fmt(l_bar));
}

std::vector<double> bifurcation_grid(const ModelParams& p, std::size_t n,
                                     double lo, double hi) {
  const double c_star = p.mu * (p.gamma + p.mu) / p.beta;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double frac = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    grid[i] = c_star * (lo + (hi - lo) * frac);
  }
  return grid;
}

CheckResult check_bifurcation_continuity(const ModelParams& p,
                                         const std::vector<double>& c_grid,
                                         const BifurcationOptions& opts) {
  if (c_grid.size() < 2) throw DomainError("bifurcation check needs at least two inputs");
  auto formula = [&](double c) {
    ModelParams q = p;
    q.b_hat = c;
    if (r0_hat(q) <= 1.0) return disease_free_eq(q).point;
    return endemic_eq(q).point;
  };
  auto solve = [&](double c) {
    ModelParams q = p;
    q.b_hat = c;
    return steady_state(q, c, opts.x0, opts.tol, opts.t_max, opts.dt).state;
  };

  std::vector<State> coarse;
  double max_err = 0.0;
  double err_at = c_grid.front();
  for (double c : c_grid) {
    const State ss = solve(c);
    const State ref = formula(c);
    const double err = distance(ss, ref) / (1.0 + state_norm(ref));
    if (err > max_err) {
      max_err = err;
      err_at = c;
    }
    coarse.push_back(ss);
  }
  double lipschitz = 0.0;
  double coarse_jump = 0.0;
  for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
    const double jump = distance(coarse[i], coarse[i + 1]);
    coarse_jump = std::max(coarse_jump, jump);
    lipschitz = std::max(lipschitz, jump / std::abs(c_grid[i + 1] - c_grid[i]));
  }
  double fine_jump = 0.0;
  for (std::size_t i = 0; i + 1 < coarse.size(); ++i) {
    const State mid = solve(0.5 * (c_grid[i] + c_grid[i + 1]));
    fine_jump = std::max({fine_jump, distance(coarse[i], mid),
                          distance(mid, coarse[i + 1])});
  }
  const double refine_ratio = coarse_jump > 0.0 ? fine_jump / coarse_jump : 0.0;

  const double c_star = p.mu * (p.gamma + p.mu) / p.beta;
  const State left = solve(c_star * (1.0 - opts.threshold_offset));
  const State right = solve(c_star * (1.0 + opts.threshold_offset));
  const double lr = distance(left, right) / state_norm(right);

  const double worst = std::min({opts.state_rtol - max_err, opts.state_rtol - lr,
                                 0.75 - refine_ratio,
                                 std::isfinite(lipschitz) ? kInf : -kInf});
  return make_result(
      "bifurcation_continuity", worst, 0.0, err_at, 2 * c_grid.size() + 1,
      "max formula error " + fmt(max_err) + ", left/right difference " + fmt(lr) +
          ", Lipschitz estimate " + fmt(lipschitz) + ", refinement ratio " +
          fmt(refine_ratio));
}

CheckResult check_sublevel_nesting(const ModelParams& p,
                                   const NestingSpec& spec) {
  if (spec.a > spec.b) throw DomainError("nesting needs a <= b");
  EnLyapParams la = spec.base;
  EnLyapParams lb = spec.base;
  if (spec.axis == NestingAxis::LambdaHat2) {
    la.lambda_hat2 = spec.a;
    lb.lambda_hat2 = spec.b;
  } else {
    la.k = spec.a;
    lb.k = spec.b;
  }
  la.lambda3 = 0.0;
  lb.lambda3 = 0.0;
  const double l3 = 0.5 * std::min(lambda3_bound(p, la).bound,
                                   lambda3_bound(p, lb).bound);
  la.lambda3 = l3;
  lb.lambda3 = l3;
  const EndemicLyapunov va(p, la);
  const EndemicLyapunov vb(p, lb);
  const State& xh = va.equilibrium().point;
  const double level = spec.level;
  const double x2_max = spec.axis == NestingAxis::K
                            ? level / spec.base.lambda2
                            : level / std::min(la.lambda0(), lb.lambda0());

  Uniform uni(spec.seed);
  std::size_t members = 0;
  std::size_t violations = 0;
  double worst = kInf;
  Location where;
  for (std::size_t n = 0; n < spec.samples; ++n) {
    const Deviation d{uni(-xh.s, level / spec.base.lambda1),
                      uni(-xh.i, x2_max), uni(-xh.r, xh.r)};
    if (!vb.in_sublevel(d, level)) continue;
    ++members;
    double margin = -kInf;
    if (va.in_sublevel(d, kInf)) margin = (level - va.value(d)) / (1.0 + level);
    if (margin < 0.0) ++violations;
    if (margin < worst) {
      worst = margin;
      where = d;
    }
  }
  if (members == 0) worst = 0.0;
  const std::string axis = spec.axis == NestingAxis::LambdaHat2 ? "lambda_hat2" : "k";
  return make_result("sublevel_nesting_" + axis, worst, 0.0, where, spec.samples,
                     axis + ": a = " + fmt(spec.a) + ", b = " + fmt(spec.b) +
                         ", L = " + fmt(level) + ", members of the b-set: " +
                         std::to_string(members) +
                         ", violations: " + std::to_string(violations));
}

std::vector<Deviation> sample_w_region_starts(const EndemicLyapunov& lyap,
                                              std::size_t n,
                                              std::uint64_t seed) {
  Uniform uni(seed);
  const State& xh = lyap.equilibrium().point;
  std::vector<Deviation> out;
  out.reserve(n);
  while (out.size() < n) {
    const double x2 = uni(-0.999 * xh.i, 0.0);
    const double x1 = uni(-xh.s, -lyap.params().k * x2);
    out.push_back({x1, x2, uni(-xh.r, xh.r)});
  }
  return out;
}

CheckResult check_w_region(const EndemicLyapunov& lyap,
                           const std::vector<Deviation>& starts, double t_end,
                           double dt) {
  const Equilibrium& eq = lyap.equilibrium();
  const double mu = lyap.model().mu;
  const double k = lyap.params().k;
  const double l_bar = lyap.params().l_bar;
  auto in_t = [&](const Deviation& d) { return d.x1 <= -k * d.x2 && d.x2 <= 0.0; };
  auto w_of = [](const Deviation& d) { return -d.x1 - d.x2 + std::abs(d.x3); };

  double worst = kInf;
  Location where;
  std::size_t samples = 0;
  std::size_t not_entered = 0;
  double max_entry = 0.0;
  for (const Deviation& start : starts) {
    if (!in_t(start)) throw DomainError("W-region start outside T");
    bool entered = false;
    bool prev_in_t = false;
    double prev_w = 0.0;
    double prev_t = 0.0;
    integrate_visit(
        lyap.model(), state_from(eq, start), ConstantInput{lyap.model().b_hat},
        t_end, dt, [&](double t, const State& x, double) {
          const Deviation d = deviation_from(eq, x);
          const bool now_in_t = in_t(d);
          const double w = w_of(d);
          if (prev_in_t && now_in_t && t > prev_t) {
            const double dini = (w - prev_w) / (t - prev_t);
            const double margin = (-mu * std::min(w, prev_w) - dini) / (1.0 + prev_w);
            ++samples;
            if (margin < worst) {
              worst = margin;
              where = t;
            }
          }
          prev_in_t = now_in_t;
          prev_w = w;
          prev_t = t;
          if (lyap.in_sublevel(d, l_bar)) {
            entered = true;
            max_entry = std::max(max_entry, t);
            return false;
          }
          return true;
        });
    if (!entered) ++not_entered;
  }
  if (samples == 0) worst = 0.0;
  if (not_entered > 0) worst = -kInf;
  return make_result("w_region", worst, 1e-6, where, samples,
                     std::to_string(starts.size()) + " starts, " +
                         std::to_string(not_entered) +
                         " never entered the sublevel set, latest entry t = " +
                         fmt(max_entry));
}

CheckResult separability_obstruction_demo(const ModelParams& p) {
  if (r0_hat(p) <= 1.0) throw RegimeError("separability demo needs the endemic regime");
  const State xh = endemic_eq(p).point;
  const double ratio = p.gamma / p.mu;

  // Point classes at x1 = x̂1 on either side of x̂2, with x3 between x̂3 and (γ/μ)x2.
  const double x2_up = 1.2 * xh.i;
  const State up{xh.s, x2_up, 0.5 * (xh.r + ratio * x2_up)};
  const double x2_down = 0.8 * xh.i;
  const State down{xh.s, x2_down, 0.5 * (xh.r + ratio * x2_down)};

  auto required_sign = [&](const State& x, double& f1_out) {
    const Triple f = rhs(p, x, p.b_hat);
    const double x3t = x.r - xh.r;
    f1_out = f[0];
    // With V2'(x̃2)f2 = 0 and V3'(x̃3)f3 ≥ 0, grad·f < 0 forces V1'(0)·f1 < 0.
    const bool third_nonneg = (x3t > 0.0 && f[2] >= 0.0) || (x3t < 0.0 && f[2] <= 0.0);
    const bool second_zero = std::abs(f[1]) <= 1e-9 * (1.0 + x.i);
    if (!third_nonneg || !second_zero || f[0] == 0.0) return 0;
    return f[0] < 0.0 ? 1 : -1;
  };
  double f1_up = 0.0;
  double f1_down = 0.0;
  const int sign_up = required_sign(up, f1_up);
  const int sign_down = required_sign(down, f1_down);
  const Triple f_eq_line = rhs(p, State{xh.s, xh.i, xh.r + 1.0}, p.b_hat);

  const bool contradiction = sign_up == 1 && sign_down == -1;
  const bool vanishes = std::abs(f_eq_line[0]) <= 1e-9 * (1.0 + xh.s);
  const double worst = contradiction && vanishes ? std::min(-f1_up, f1_down) : -kInf;
  return make_result(
      "separability_obstruction", worst, 0.0, Deviation{0.0, x2_up - xh.i, up.r - xh.r}, 3,
      "x2 > x2_hat: required sign of V1'(0) = " + std::string(sign_up > 0 ? "+" : sign_up < 0 ? "-" : "?") +
          " (f1 = " + fmt(f1_up) + "); x2 < x2_hat: required sign = " +
          std::string(sign_down > 0 ? "+" : sign_down < 0 ? "-" : "?") + " (f1 = " +
          fmt(f1_down) + "); f1 at x2 = x2_hat: " + fmt(f_eq_line[0]));
}

CheckResult prohibited_region_demo(const ModelParams& p, const State& start,
                                   const std::vector<double>& l_bars,
                                   double t_end, double dt) {
  const State xe = endemic_eq(p).point;
  const State xf = disease_free_eq(p).point;
  if (!(start.s < xe.s && start.i > 0.0)) {
    throw DomainError("prohibited-region start needs x1 < x1_hat and x2 > 0");
  }
  std::size_t failures = 0;
  std::string notes;

  const Triple f0 = rhs(p, start, p.b_hat);
  if (!(f0[1] < 0.0)) {
    ++failures;
    notes += "initial dx2/dt not negative; ";
  }
  const Triple f_axis = rhs(p, State{start.s, 0.0, start.r}, p.b_hat);
  if (!(f_axis[1] == 0.0 && (start.s >= xf.s || f_axis[0] > 0.0))) {
    ++failures;
    notes += "axis invariance failed; ";
  }

  bool initial_phase = true;
  double prev_i = start.i;
  std::size_t increases = 0;
  double min_dist_xf = kInf;
  State last = start;
  integrate_visit(p, start, ConstantInput{p.b_hat}, t_end, dt,
                  [&](double, const State& x, double) {
                    if (initial_phase) {
                      if (x.s < xe.s) {
                        if (x.i > prev_i) ++increases;
                      } else {
                        initial_phase = false;
                      }
                    }
                    prev_i = x.i;
                    min_dist_xf = std::min(min_dist_xf, distance(x, xf));
                    last = x;
                    return true;
                  });
  failures += increases;
  const double final_dist = distance(last, xe);
  if (final_dist > 1e-2) {
    ++failures;
    notes += "did not converge to the endemic equilibrium; ";
  }

  const Deviation dev = deviation_from(Equilibrium{EquilibriumKind::Endemic, xe}, start);
  std::size_t members = 0;
  for (double l_bar : l_bars) {
    const EnLyapParams lp = select_en_params(p, EnTarget{l_bar, std::nullopt});
    if (EndemicLyapunov(p, lp).in_sublevel(dev, l_bar)) ++members;
  }
  failures += members;
  return make_result(
      "prohibited_region", failures == 0 ? 0.0 : -static_cast<double>(failures), 0.0, dev, l_bars.size() + 2,
      notes + "x2 increases while x1 < x1_hat: " + std::to_string(increases) +
          ", closest approach to x_f: " + fmt(min_dist_xf) +
          ", final distance to x_e: " + fmt(final_dist) + ", start inside the sublevel set for " +
          std::to_string(members) + " of " + std::to_string(l_bars.size()) +
          " l_bar values; -x1t - x2t = " + fmt(-dev.x1 - dev.x2) + " vs x2_hat = " + fmt(xe.i));
}

// ---------------------------------------------------------------------------
// Disease-free checks.

namespace {

Deviation random_df_dev(Uniform& uni, double x1h) {
  return {uni(-x1h, 3.0 * x1h), uni(0.0, 3.0 * x1h), uni(0.0, 3.0 * x1h)};
}

}  // namespace

CheckResult check_df_positive_definite(const DiseaseFreeLyapunov& lyap,
                                       std::size_t n, std::uint64_t seed) {
  Uniform uni(seed);
  const double x1h = lyap.equilibrium().point.s;
  double worst = lyap.value(Deviation{}) == 0.0 ? kInf : -kInf;
  Location where = Deviation{};
  for (std::size_t k = 0; k < n; ++k) {
    const Deviation d = random_df_dev(uni, x1h);
    if (d.norm() == 0.0) continue;
    const double ratio = lyap.value(d) / d.norm();
    if (ratio < worst) {
      worst = ratio;
      where = d;
    }
  }
  return make_result("df_positive_definite", worst, kStrictTolerance, where, n + 1,
                     "min V/|dev| over random deviations; V(0) = " +
                         fmt(lyap.value(Deviation{})));
}

CheckResult check_df_continuity(const DiseaseFreeLyapunov& lyap, std::size_t n,
                                std::uint64_t seed) {
  Uniform uni(seed);
  const double x1h = lyap.equilibrium().point.s;
  double worst = kInf;
  Location where;
  for (std::size_t k = 0; k < n; ++k) {
    Deviation d;
    DfRegion left;
    DfRegion right;
    if (k % 2 == 0) {
      d = {0.0, uni(0.0, 3.0 * x1h), uni(0.0, 3.0 * x1h)};
      left = DfRegion::B;
      right = DfRegion::A;
    } else {
      do {
        d = {0.0, uni(0.0, 3.0 * x1h), uni(0.0, 3.0 * x1h)};
        d.x1 = lyap.bc_boundary(d.x2, d.x3);
        if (d.x1 < -x1h) {
          const double shrink = uni(0.0, 1.0) * (-x1h) / d.x1;
          d.x2 *= shrink;
          d.x3 *= shrink;
          d.x1 = lyap.bc_boundary(d.x2, d.x3);
        }
      } while (d.x1 < -x1h);
      left = DfRegion::C;
      right = DfRegion::B;
    }
    const double vl = lyap.value_in_region(d, left);
    const double vr = lyap.value_in_region(d, right);
    const double margin = -std::abs(vl - vr) / (1.0 + std::abs(vl));
    if (margin < worst) {
      worst = margin;
      where = d;
    }
  }
  return make_result("df_continuity", worst, 1e-9, where, n,
                     "one-sided values at the x1t = 0 and B/C boundaries");
}

std::vector<double> df_certification_inputs(const ModelParams& p) {
  return {-p.b_hat, -0.5 * p.b_hat, 0.0, p.b_hat, 10.0 * p.b_hat};
}

namespace {

template <class Fn>
void for_df_grid(const DiseaseFreeLyapunov& lyap, std::size_t n, Fn&& fn) {
  const double x1h = lyap.equilibrium().point.s;
  auto axis = [&](double lo, double hi, std::size_t i) {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t l = 0; l < n; ++l) {
        const Deviation d{axis(-x1h, 3.0 * x1h, i), axis(0.0, 3.0 * x1h, j),
                          axis(0.0, 3.0 * x1h, l)};
        if (d.norm() == 0.0 || lyap.boundary_distance(d) <= band(d)) continue;
        fn(d);
      }
    }
  }
}

}  // namespace

CheckResult check_df_grid_iss(const DiseaseFreeLyapunov& lyap, std::size_t n,
                              const std::vector<double>& inputs) {
  if (n < 2) throw DomainError("grid needs at least two points per axis");
  double worst = kInf;
  Location where;
  std::size_t samples = 0;
  std::size_t active = 0;
  for_df_grid(lyap, n, [&](const Deviation& d) {
    const double v = lyap.value(d);
    const Triple g = lyap.gradient(d);
    for (double u : inputs) {
      ++samples;
      if (v < lyap.chi(std::abs(u))) continue;
      ++active;
      const Triple f = rhs(lyap.model(), state_from(lyap.equilibrium(), d),
                           lyap.model().b_hat + u);
      const double slack = -dot3(g, f) - lyap.decay_rate() * v;
      const double margin = slack / (1.0 + norm3(g) * norm3(f));
      if (margin < worst) {
        worst = margin;
        where = d;
      }
    }
  });
  if (active == 0) worst = 0.0;
  return make_result("df_grid_iss", worst, 1e-12, where, samples,
                     std::to_string(active) + " (point, input) pairs with V >= chi(|u|)");
}

CheckResult check_df_region_bounds(const DiseaseFreeLyapunov& lyap,
                                   std::size_t n,
                                   const std::vector<double>& inputs) {
  double worst = kInf;
  Location where;
  std::size_t samples = 0;
  for_df_grid(lyap, n, [&](const Deviation& d) {
    const Triple g = lyap.gradient(d);
    for (double u : inputs) {
      ++samples;
      const Triple f = rhs(lyap.model(), state_from(lyap.equilibrium(), d),
                           lyap.model().b_hat + u);
      const double margin =
          (lyap.region_bound(d, u) - dot3(g, f)) / (1.0 + norm3(g) * norm3(f));
      if (margin < worst) {
        worst = margin;
        where = d;
      }
    }
  });
  return make_result("df_region_bounds", worst, 1e-12, where, samples,
                     "A: -mu V + u, B: -eps_underbar V, C: -(mu-mu0) V - mu0 u/(beta x1_hat)");
}

// ---------------------------------------------------------------------------
// Endemic checks.

std::vector<Deviation> sample_sublevel(const EndemicLyapunov& lyap,
                                       std::size_t n, std::uint64_t seed) {
  Uniform uni(seed);
  const State& xh = lyap.equilibrium().point;
  const EnLyapParams& lp = lyap.params();
  const double x3_far =
      lp.lambda3 > 0.0 ? std::min(lp.l_bar / lp.lambda3, 1e6) : xh.r;
  std::vector<Deviation> out;
  out.reserve(n);
  std::size_t attempts = 0;
  while (out.size() < n) {
    if (++attempts > 1000 * n + 1000) {
      throw NoConvergence("rejection sampling of the sublevel set stalled");
    }
    const double x3 = uni(0.0, 1.0) < 0.5 ? uni(-xh.r, xh.r)
                                         : uni(-xh.r, std::max(xh.r, x3_far));
    const Deviation d{uni(-xh.s, lp.l_bar / lp.lambda1),
                      uni(-xh.i, lp.l_bar / lp.lambda0()), x3};
    if (!lyap.in_sublevel(d, lp.l_bar)) continue;
    const double tau = band(d);
    if (d.norm() == 0.0 || std::abs(d.x3) <= tau || lyap.boundary_distance(d) <= tau) {
      continue;
    }
    out.push_back(d);
  }
  return out;
}

CheckResult check_en_positive_definite(const EndemicLyapunov& lyap,
                                       const std::vector<Deviation>& samples) {
  double worst = lyap.value(Deviation{}) == 0.0 ? kInf : -kInf;
  Location where = Deviation{};
  for (const Deviation& d : samples) {
    const double ratio = lyap.value(d) / d.norm();
    if (ratio < worst) {
      worst = ratio;
      where = d;
    }
  }
  return make_result("en_positive_definite", worst, kStrictTolerance, where,
                     samples.size() + 1, "min V/|dev| over sublevel samples");
}

CheckResult check_en_continuity(const EndemicLyapunov& lyap,
                                std::size_t n_per_boundary, std::uint64_t seed) {
  Uniform uni(seed);
  const State& xh = lyap.equilibrium().point;
  const EnLyapParams& lp = lyap.params();
  const double x2_top = 0.99 * lp.l_bar / lp.lambda0();
  double worst = kInf;
  Location where;
  std::size_t samples = 0;
  auto probe = [&](const Deviation& d, EnRegion a, EnRegion b) {
    if (!lyap.in_H(d)) return;
    ++samples;
    const double va = lyap.value12_in_region(d, a);
    const double vb = lyap.value12_in_region(d, b);
    const double margin = -std::abs(va - vb) / (1.0 + std::abs(va));
    if (margin < worst) {
      worst = margin;
      where = d;
    }
  };
  for (std::size_t n = 0; n < n_per_boundary; ++n) {
    const double x3 = uni(-xh.r, xh.r);
    double x2 = uni(0.0, x2_top);
    probe({-lp.k * x2, x2, x3}, EnRegion::A, EnRegion::B);
    x2 = uni(0.0, x2_top);
    probe({lyap.nu(x2), x2, x3}, EnRegion::B, EnRegion::C);
    x2 = uni(-0.99 * xh.i, 0.0);
    probe({-lp.k * x2, x2, x3}, EnRegion::D, EnRegion::E);
    x2 = uni(-0.99 * xh.i, 0.0);
    probe({lyap.theta_inv(-x2), x2, x3}, EnRegion::E, EnRegion::F);
    const double x1 = uni(-xh.s, lp.l_bar / lp.lambda1);
    if (x1 >= 0.0) {
      probe({x1, 0.0, x3}, EnRegion::A, EnRegion::F);
    } else {
      probe({x1, 0.0, x3}, EnRegion::C, EnRegion::D);
    }
  }
  return make_result("en_continuity", worst, 1e-9, where, samples,
                     "five internal boundaries, one-sided formulas compared");
}

CheckResult check_en_strict_decrease(const EndemicLyapunov& lyap,
                                     const std::vector<Deviation>& samples) {
  double worst = kInf;
  Location where;
  for (const Deviation& d : samples) {
    const Triple g = lyap.gradient(d);
    const Triple f = rhs(lyap.model(), state_from(lyap.equilibrium(), d),
                         lyap.model().b_hat);
    const double margin = -dot3(g, f) / (1.0 + norm3(g) * norm3(f));
    if (margin < worst) {
      worst = margin;
      where = d;
    }
  }
  return make_result("en_strict_decrease", worst, kStrictTolerance, where,
                     samples.size(), "-grad.f / scale with u = 0 (must be > 0)");
}

CheckResult check_en_region_bounds(const EndemicLyapunov& lyap,
                                   const std::vector<Deviation>& samples) {
  double worst = kInf;
  Location where;
  for (const Deviation& d : samples) {
    const Triple g = lyap.gradient(d);
    const Triple f = rhs(lyap.model(), state_from(lyap.equilibrium(), d),
                         lyap.model().b_hat);
    const double margin =
        (lyap.region_bound(d, 0.0) - dot3(g, f)) / (1.0 + norm3(g) * norm3(f));
    if (margin < worst) {
      worst = margin;
      where = d;
    }
  }
  return make_result("en_region_bounds", worst, 1e-10, where, samples.size(),
                     "A/F: -mu V, B: -a_B V, C/D: -(P^-1)' mu v - mu V3, E: k-corrected");
}

CheckResult check_en_iss_implication(const EndemicLyapunov& lyap,
                                     const std::vector<Deviation>& samples,
                                     const std::vector<double>& inputs) {
  const Interval range = lyap.input_range();
  double worst = kInf;
  Location where;
  std::size_t samples_n = 0;
  std::size_t active = 0;
  const double delta = lyap.params().delta;
  for (double u : inputs) {
    if (!(u > range.lo && u < range.hi)) {
      throw RangeError("input " + fmt(u) + " outside the admissible range");
    }
    const double chi = lyap.chi(u);
    for (const Deviation& d : samples) {
      ++samples_n;
      const double v = lyap.value(d);
      if (v < chi) continue;
      ++active;
      const Triple g = lyap.gradient(d);
      const Triple f = rhs(lyap.model(), state_from(lyap.equilibrium(), d),
                           lyap.model().b_hat + u);
      const double q = -lyap.region_bound(d, 0.0);
      const double margin = (-(1.0 - delta) * q - dot3(g, f)) / (1.0 + norm3(g) * norm3(f));
      if (margin < worst) {
        worst = margin;
        where = d;
      }
    }
  }
  if (active == 0) worst = 0.0;
  return make_result("en_iss_implication", worst, 1e-10, where, samples_n,
                     std::to_string(active) + " (point, input) pairs with V >= chi(u)");
}

CheckResult check_en_inclusion_in_H(const EndemicLyapunov& lyap,
                                    std::size_t n, std::uint64_t seed) {
  Uniform uni(seed);
  const State& xh = lyap.equilibrium().point;
  const EnLyapParams& lp = lyap.params();
  double worst = kInf;
  Location where;
  std::size_t members = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const Deviation d{uni(-xh.s, 2.0 * lp.l_bar), uni(-xh.i, 2.0 * lp.l_bar),
                      uni(-xh.r, xh.r)};
    if (!lyap.in_sublevel(d, lp.l_bar)) continue;
    ++members;
    const double one_minus_k = 1.0 - lp.k;
    const double slack = std::min(
        {d.x2 + xh.i, lp.l_bar / (lp.lambda2 * one_minus_k) - d.x2,
         one_minus_k * xh.i + d.x1 + d.x2,
         lp.lambda2 * one_minus_k * xh.i + lp.lambda1 * d.x1 - lp.lambda_hat2 * d.x2});
    if (slack < worst) {
      worst = slack;
      where = d;
    }
  }
  if (members == 0) worst = 0.0;
  return make_result("en_sublevel_in_H", worst, 0.0, where, n,
                     std::to_string(members) + " sublevel members; margin is the smallest H slack");
}

CheckResult check_en_feasibility(const EndemicLyapunov& lyap) {
  const FeasibilityReport r = feasibility_report(lyap.model(), lyap.params());
  const EnLyapParams& lp = lyap.params();
  const double worst = std::min({(r.k0 - lp.k) / r.k0,
                                 (r.lambda3.bound - lp.lambda3) / r.lambda3.bound,
                                 lp.lambda0()});
  return make_result("en_feasibility", worst, kStrictTolerance, std::monostate{}, 1,
                     "k = " + fmt(lp.k) + " < k0 = " + fmt(r.k0) + ", lambda3 = " +
                         fmt(lp.lambda3) + " < bound = " + fmt(r.lambda3.bound));
}

namespace {

CheckResult corner_condition_check(const EndemicLyapunov& lyap) {
  const CornerConditionResult c = check_corner_condition(lyap.model(), lyap.params());
  double worst = c.worst_margin;
  if (!c.holds) worst = std::min(worst, -kInf);
  return make_result("corner_condition", worst, kStrictTolerance, c.argmin_l, 2049,
                     "worst margin over (0, l_bar] at L = " + fmt(c.argmin_l) +
                         ", margin at L = 0: " + fmt(c.margin_at_zero));
}

}  // namespace

TrajectoryChecks check_trajectories(const LyapunovFunction& lyap,
                                    const MonotonicityOptions& opts) {
  const ModelParams& p = lyap_model(lyap);
  const Equilibrium& eq = lyap_equilibrium(lyap);
  const double t_end = horizon(p, opts.t_end);

  std::vector<Deviation> starts;
  DecaySpec spec{0.0, opts.v_floor};
  if (const auto* df = std::get_if<DiseaseFreeLyapunov>(&lyap)) {
    Uniform uni(opts.seed);
    for (std::size_t k = 0; k < opts.n_starts; ++k) {
      starts.push_back(random_df_dev(uni, eq.point.s));
    }
    spec.rate = df->decay_rate();
  } else {
    starts = sample_sublevel(std::get<EndemicLyapunov>(lyap), opts.n_starts, opts.seed);
  }

  double worst_dini = kInf;
  Location dini_at;
  std::size_t dini_samples = 0;
  std::size_t failing = 0;
  double worst_dist = 0.0;
  Location dist_at;
  for (const Deviation& start : starts) {
    DiniMonitor monitor(lyap, spec);
    State last{};
    integrate_visit(p, state_from(eq, start), ConstantInput{p.b_hat}, t_end, opts.dt,
                    [&](double t, const State& x, double) {
                      monitor.feed(t, x);
                      last = x;
                      return true;
                    });
    const CheckResult r = monitor.result("dini");
    dini_samples += r.samples;
    if (!r.passed) ++failing;
    if (r.worst_margin < worst_dini) {
      worst_dini = r.worst_margin;
      dini_at = start;
    }
    const double dist = distance(last, eq.point);
    if (dist > worst_dist) {
      worst_dist = dist;
      dist_at = start;
    }
  }
  TrajectoryChecks out;
  out.monotonicity = make_result(
      "trajectory_monotonicity", worst_dini, 1e-6, dini_at, dini_samples,
      std::to_string(starts.size()) + " starts, " + std::to_string(failing) +
          " with a non-decreasing step or Dini excess; floor V = " + fmt(opts.v_floor));
  out.convergence = make_result(
      "trajectory_convergence", opts.final_tol - worst_dist, 0.0, dist_at, starts.size(),
      "largest distance to the equilibrium at t = " + fmt(t_end) + ": " + fmt(worst_dist));
  return out;
}

VerificationReport certify_disease_free(const DiseaseFreeLyapunov& lyap,
                                        const SuiteOptions& opts) {
  const ModelParams& p = lyap.model();
  const double t_end = horizon(p, opts.t_end);
  const std::vector<double> inputs = df_certification_inputs(p);
  VerificationReport report;
  report.checks.push_back(check_df_positive_definite(lyap, 1000, opts.seed));
  report.checks.push_back(check_df_continuity(lyap, 1000, opts.seed + 1));
  report.checks.push_back(check_df_grid_iss(lyap, opts.grid_n, inputs));
  report.checks.push_back(check_df_region_bounds(lyap, opts.grid_n, inputs));

  MonotonicityOptions mono;
  mono.n_starts = opts.n_trajectories;
  mono.seed = opts.seed + 2;
  mono.t_end = t_end;
  mono.dt = opts.dt;
  mono.final_tol = 1e-3;
  const TrajectoryChecks traj = check_trajectories(lyap, mono);
  report.checks.push_back(traj.monotonicity);
  report.checks.push_back(traj.convergence);

  IssOptions iss{State{100.0, 50.0, 0.0}, t_end, opts.dt, 0.2};
  for (double u : {0.05, -0.05, 0.1, -0.1, 0.2, -0.2}) {
    CheckResult r = check_iss_bound(lyap, StepInput{0.0, p.b_hat, p.b_hat * (1.0 + u)}, iss);
    r.name = "iss_bound_step_" + fmt(u * p.b_hat);
    report.checks.push_back(std::move(r));
  }
  {
    CheckResult r = check_iss_bound(lyap, SinusoidInput{p.b_hat, 0.2 * p.b_hat, 0.05}, iss);
    r.name = "iss_bound_sinusoid";
    report.checks.push_back(std::move(r));
  }
  report.checks.push_back(check_iss_gain_linearity(lyap, 0.1 * p.b_hat, iss));
  report.checks.push_back(check_bifurcation_continuity(p, bifurcation_grid(p)));
  return report;
}

VerificationReport certify_endemic(const EndemicLyapunov& lyap,
                                   const SuiteOptions& opts) {
  const ModelParams& p = lyap.model();
  const EnLyapParams& lp = lyap.params();
  const double t_end = horizon(p, opts.t_end);
  VerificationReport report;
  report.checks.push_back(check_en_feasibility(lyap));
  report.checks.push_back(corner_condition_check(lyap));

  const std::vector<Deviation> samples = sample_sublevel(lyap, opts.en_samples, opts.seed);
  report.checks.push_back(check_en_positive_definite(lyap, samples));
  report.checks.push_back(check_en_continuity(lyap, 200, opts.seed + 1));
  report.checks.push_back(check_en_strict_decrease(lyap, samples));
  report.checks.push_back(check_en_region_bounds(lyap, samples));
  const Interval range = lyap.input_range();
  report.checks.push_back(
      check_en_iss_implication(lyap, samples, {0.5 * range.lo, 0.5 * range.hi}));
  report.checks.push_back(check_en_inclusion_in_H(lyap, 10000, opts.seed + 2));

  MonotonicityOptions mono;
  mono.n_starts = opts.n_trajectories;
  mono.seed = opts.seed + 3;
  mono.t_end = t_end;
  mono.dt = opts.dt;
  mono.final_tol = 1e-2;
  const TrajectoryChecks traj = check_trajectories(lyap, mono);
  report.checks.push_back(traj.monotonicity);
  report.checks.push_back(traj.convergence);

  NestingSpec nest;
  nest.base = lp;
  nest.level = lp.l_bar;
  nest.samples = opts.nesting_samples;
  nest.seed = opts.seed + 4;
  nest.axis = NestingAxis::LambdaHat2;
  nest.a = 0.5 * lp.lambda_hat2;
  nest.b = lp.lambda_hat2;
  report.checks.push_back(check_sublevel_nesting(p, nest));
  nest.axis = NestingAxis::K;
  nest.a = 0.5 * lp.k;
  nest.b = lp.k;
  report.checks.push_back(check_sublevel_nesting(p, nest));

  report.checks.push_back(
      check_w_region(lyap, sample_w_region_starts(lyap, 20, opts.seed + 5), t_end, opts.dt));

  const State x0 = state_from(lyap.equilibrium(), Deviation{50.0, 20.0, 100.0});
  IssOptions iss{x0, t_end, opts.dt, 0.2};
  for (double frac : {0.5, -0.5}) {
    const double u = frac > 0.0 ? frac * range.hi : -frac * range.lo;
    const InputSignal sig = StepInput{0.0, p.b_hat, p.b_hat + u};
    CheckResult r = check_iss_bound(lyap, sig, iss);
    r.name = "iss_bound_step_" + fmt(u);
    report.checks.push_back(std::move(r));
    CheckResult inv = check_forward_invariance(lyap, sig, iss);
    inv.name = "forward_invariance_step_" + fmt(u);
    report.checks.push_back(std::move(inv));
  }
  {
    const InputSignal sig = SinusoidInput{p.b_hat, 0.4 * std::min(range.hi, -range.lo), 0.05};
    CheckResult r = check_iss_bound(lyap, sig, iss);
    r.name = "iss_bound_sinusoid";
    report.checks.push_back(std::move(r));
  }
  report.checks.push_back(check_iss_gain_linearity(lyap, 0.25 * range.hi, iss));
  report.checks.push_back(separability_obstruction_demo(p));
  report.checks.push_back(
      prohibited_region_demo(p, State{100.0, 0.01, 0.0}, {20.0, 340.0, 1000.0, 1e4}, t_end, opts.dt));
  return report;
}

}  // namespace sirlyap
