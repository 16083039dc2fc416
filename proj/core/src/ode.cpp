#include "sirlyap/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "sirlyap/errors.hpp"

namespace sirlyap {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

State axpy(const State& x, double h, const Triple& k) {
  return {x.s + h * k[0], x.i + h * k[1], x.r + h * k[2]};
}

double euclid(const Triple& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

double euclid(const State& x) {
  return std::sqrt(x.s * x.s + x.i * x.i + x.r * x.r);
}

void clamp_or_throw(State& x, double t) {
  const double floor = 1e-12 * std::max(1.0, std::abs(x.total()));
  for (double* c : {&x.s, &x.i, &x.r}) {
    if (!std::isfinite(*c)) {
      throw NonFiniteState("non-finite state component at t = " +
                           std::to_string(t));
    }
    if (*c < 0.0) {
      if (*c > -floor) {
        *c = 0.0;
      } else {
        throw NonFiniteState("state component " + std::to_string(*c) +
                             " fell below zero at t = " + std::to_string(t) +
                             "; reduce dt");
      }
    }
  }
}

}  // namespace

void validate(const InputSignal& sig) {
  std::visit(
      Overloaded{
          [](const ConstantInput& c) {
            if (!(c.value >= 0.0) || !std::isfinite(c.value)) {
              throw DomainError("constant input must be nonnegative");
            }
          },
          [](const StepInput& s) {
            if (!(s.before >= 0.0) || !(s.after >= 0.0) ||
                !std::isfinite(s.before) || !std::isfinite(s.after) ||
                !std::isfinite(s.t_switch)) {
              throw DomainError("step input values must be nonnegative");
            }
          },
          [](const PiecewiseInput& pw) {
            if (pw.knots.empty()) {
              throw DomainError("piecewise input needs at least one knot");
            }
            for (std::size_t i = 0; i < pw.knots.size(); ++i) {
              if (!(pw.knots[i].second >= 0.0) ||
                  !std::isfinite(pw.knots[i].second)) {
                throw DomainError("piecewise input values must be nonnegative");
              }
              if (i > 0 && !(pw.knots[i].first > pw.knots[i - 1].first)) {
                throw DomainError("piecewise knots must be strictly increasing");
              }
            }
          },
          [](const SinusoidInput& s) {
            if (!std::isfinite(s.mean) || !std::isfinite(s.amplitude) ||
                !std::isfinite(s.omega)) {
              throw DomainError("sinusoid parameters must be finite");
            }
          },
      },
      sig);
}

double sample_input(const InputSignal& sig, double t) {
  return std::visit(
      Overloaded{
          [](const ConstantInput& c) { return c.value; },
          [t](const StepInput& s) { return t < s.t_switch ? s.before : s.after; },
          [t](const PiecewiseInput& pw) {
            double value = pw.knots.front().second;
            for (const auto& [ti, ci] : pw.knots) {
              if (t >= ti) {
                value = ci;
              } else {
                break;
              }
            }
            return value;
          },
          [t](const SinusoidInput& s) {
            return std::max(0.0, s.mean + s.amplitude * std::sin(s.omega * t));
          },
      },
      sig);
}

std::vector<double> input_breakpoints(const InputSignal& sig, double t_end) {
  std::vector<double> out;
  auto keep = [&](double t) {
    if (t > 0.0 && t < t_end) out.push_back(t);
  };
  if (const auto* s = std::get_if<StepInput>(&sig)) {
    keep(s->t_switch);
  } else if (const auto* pw = std::get_if<PiecewiseInput>(&sig)) {
    for (const auto& knot : pw->knots) keep(knot.first);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::pair<double, double> input_range(const InputSignal& sig, double t_end) {
  return std::visit(
      Overloaded{
          [](const ConstantInput& c) { return std::pair{c.value, c.value}; },
          [t_end](const StepInput& s) {
            if (s.t_switch <= 0.0) return std::pair{s.after, s.after};
            if (s.t_switch > t_end) return std::pair{s.before, s.before};
            return std::pair{std::min(s.before, s.after),
                             std::max(s.before, s.after)};
          },
          [t_end](const PiecewiseInput& pw) {
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            for (std::size_t i = 0; i < pw.knots.size(); ++i) {
              const bool starts_late = i > 0 && pw.knots[i].first > t_end;
              const bool superseded =
                  i + 1 < pw.knots.size() && pw.knots[i + 1].first <= 0.0;
              if (starts_late || superseded) continue;
              lo = std::min(lo, pw.knots[i].second);
              hi = std::max(hi, pw.knots[i].second);
            }
            return std::pair{lo, hi};
          },
          [](const SinusoidInput& s) {
            const double a = std::abs(s.amplitude);
            return std::pair{std::max(0.0, s.mean - a), std::max(0.0, s.mean + a)};
          },
      },
      sig);
}

double integrate_visit(const ModelParams& p, const State& x0,
                       const InputSignal& sig, double t_end, double dt,
                       const StepVisitor& visit) {
  p.validate();
  validate(sig);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw DomainError("t_end must be nonnegative");
  }
  if (!(x0.s >= 0.0 && x0.i >= 0.0 && x0.r >= 0.0)) {
    throw DomainError("initial state must be componentwise nonnegative");
  }

  std::vector<double> nodes{0.0};
  for (double b : input_breakpoints(sig, t_end)) nodes.push_back(b);
  nodes.push_back(t_end);

  State x = x0;
  double t = 0.0;
  if (!visit(t, x, sample_input(sig, t))) return t;

  for (std::size_t seg = 0; seg + 1 < nodes.size(); ++seg) {
    const double a = nodes[seg];
    const double b = nodes[seg + 1];
    if (!(b > a)) continue;
    const auto n = static_cast<std::size_t>(
        std::max(1.0, std::ceil((b - a) / dt - 1e-9)));
    const double h = (b - a) / static_cast<double>(n);
    // Inside the segment the input is evaluated by its left limit at b.
    const double b_left = std::nextafter(b, a);
    auto input_at = [&](double tau) { return sample_input(sig, std::min(tau, b_left)); };

    for (std::size_t j = 0; j < n; ++j) {
      const double t0 = a + static_cast<double>(j) * h;
      const double t1 = (j + 1 == n) ? b : a + static_cast<double>(j + 1) * h;
      const double u0 = input_at(t0);
      const double um = input_at(t0 + 0.5 * h);
      const double u1 = input_at(t1);
      const Triple k1 = rhs(p, x, u0);
      const Triple k2 = rhs(p, axpy(x, 0.5 * h, k1), um);
      const Triple k3 = rhs(p, axpy(x, 0.5 * h, k2), um);
      const Triple k4 = rhs(p, axpy(x, h, k3), u1);
      x.s += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
      x.i += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
      x.r += h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
      clamp_or_throw(x, t1);
      t = t1;
      if (!visit(t, x, sample_input(sig, t))) return t;
    }
  }
  return t;
}

Trajectory integrate(const ModelParams& p, const State& x0,
                     const InputSignal& sig, double t_end, double dt,
                     std::size_t stride) {
  if (stride == 0) stride = 1;
  Trajectory traj;
  std::size_t count = 0;
  double last_t = 0.0;
  State last_x = x0;
  double last_b = 0.0;
  integrate_visit(p, x0, sig, t_end, dt, [&](double t, const State& x, double b) {
    if (count % stride == 0) {
      traj.times.push_back(t);
      traj.states.push_back(x);
      traj.inputs.push_back(b);
    }
    ++count;
    last_t = t;
    last_x = x;
    last_b = b;
    return true;
  });
  if (traj.times.back() != last_t) {
    traj.times.push_back(last_t);
    traj.states.push_back(last_x);
    traj.inputs.push_back(last_b);
  }
  return traj;
}

SteadyStateResult steady_state(const ModelParams& p, double c, const State& x0,
                               double tol, double t_max, double dt) {
  if (!(tol > 0.0)) throw DomainError("steady_state requires tol > 0");
  SteadyStateResult result{x0, 0.0, std::numeric_limits<double>::infinity()};
  bool converged = false;
  integrate_visit(p, x0, ConstantInput{c}, t_max, dt,
                  [&](double t, const State& x, double b) {
                    result.state = x;
                    result.time = t;
                    result.residual = euclid(rhs(p, x, b));
                    converged = result.residual < tol * (1.0 + euclid(x));
                    return !converged;
                  });
  if (!converged) {
    throw NotConverged("steady state not reached by t_max = " +
                       std::to_string(t_max) + " (residual " +
                       std::to_string(result.residual) + ")");
  }
  return result;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          std::size_t thin) {
  if (thin == 0) thin = 1;
  const auto old_precision = os.precision(12);
  os << "t,S,I,R,B\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (k % thin != 0 && k + 1 != traj.size()) continue;
    const State& x = traj.states[k];
    os << traj.times[k] << ',' << x.s << ',' << x.i << ',' << x.r << ','
       << traj.inputs[k] << '\n';
  }
  os.precision(old_precision);
}

}  // namespace sirlyap
