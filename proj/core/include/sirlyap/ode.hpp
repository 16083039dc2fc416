#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <utility>
#include <variant>
#include <vector>

#include "sirlyap/model.hpp"

namespace sirlyap {

constexpr double kDefaultDt = 0.01;

struct ConstantInput {
  double value{};
  bool operator==(const ConstantInput&) const = default;
};

/// B(t) = before for t < t_switch, after for t >= t_switch.
struct StepInput {
  double t_switch{};
  double before{};
  double after{};
  bool operator==(const StepInput&) const = default;
};

/// Left-closed segments: B(t) = c_i on [t_i, t_{i+1}). Before the first knot
/// the first value applies.
struct PiecewiseInput {
  std::vector<std::pair<double, double>> knots;
  bool operator==(const PiecewiseInput&) const = default;
};

/// B(t) = max(0, mean + amplitude·sin(omega·t)).
struct SinusoidInput {
  double mean{};
  double amplitude{};
  double omega{};
  bool operator==(const SinusoidInput&) const = default;
};

using InputSignal =
    std::variant<ConstantInput, StepInput, PiecewiseInput, SinusoidInput>;

/// Throws DomainError if the signal can produce a negative value or has
/// unordered knots.
void validate(const InputSignal& sig);

double sample_input(const InputSignal& sig, double t);

/// Discontinuity times of the signal in (0, t_end), sorted.
std::vector<double> input_breakpoints(const InputSignal& sig, double t_end);

/// Smallest and largest value the signal takes on [0, t_end] (sinusoids are
/// bounded analytically).
std::pair<double, double> input_range(const InputSignal& sig, double t_end);

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<double> inputs;

  std::size_t size() const { return times.size(); }
};

/// Receives every accepted RK4 step. Returning false stops the integration.
using StepVisitor = std::function<bool(double t, const State& x, double b)>;

/// Fixed-step classical RK4. The grid is split at every input breakpoint so
/// that discontinuities fall on step boundaries. The visitor is also called
/// for the initial state. Returns the time of the last visited state.
double integrate_visit(const ModelParams& p, const State& x0,
                       const InputSignal& sig, double t_end, double dt,
                       const StepVisitor& visit);

/// Records every `stride`-th step (the first and last are always kept).
Trajectory integrate(const ModelParams& p, const State& x0,
                     const InputSignal& sig, double t_end,
                     double dt = kDefaultDt, std::size_t stride = 1);

struct SteadyStateResult {
  State state;
  double time{};
  double residual{};
};

/// Integrates with a constant input until ‖rhs‖ < tol·(1+‖x‖).
/// Throws NotConverged when t_max is reached first.
SteadyStateResult steady_state(const ModelParams& p, double c, const State& x0,
                               double tol, double t_max, double dt = 0.5);

/// CSV with header `t,S,I,R,B`; keeps every `thin`-th row plus the last one.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          std::size_t thin = 1);

}  // namespace sirlyap
