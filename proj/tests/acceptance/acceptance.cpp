// Acceptance suite: one PASS/FAIL line per criterion at the pinned tolerances.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sirlyap/levelset.hpp"
#include "sirlyap/lyap_df.hpp"
#include "sirlyap/lyap_en.hpp"
#include "sirlyap/model.hpp"
#include "sirlyap/verify.hpp"

namespace {

using namespace sirlyap;

struct Outcome {
  bool pass{};
  std::string detail;
};

DiseaseFreeLyapunov reference_df() {
  DfOverrides o;
  o.mu0 = 0.0148;
  o.eps = 0.0745;
  const ModelParams p = disease_free_example_params();
  return DiseaseFreeLyapunov(p, select_df_params(p, o));
}

EnLyapParams reference_en_params() {
  EnLyapParams lp;
  lp.lambda_hat2 = 0.01;
  lp.k = 0.0902;
  lp.l_bar = 340.0;
  lp.lambda3 = 0.0;
  lp.lambda3 = 0.5 * lambda3_bound(endemic_example_params(), lp).bound;
  return lp;
}

EndemicLyapunov reference_en() { return EndemicLyapunov(endemic_example_params(), reference_en_params()); }

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string summarize(const CheckResult& r) {
  return r.name + (r.passed ? " ok" : " FAILED") + " (margin " + num(r.worst_margin) + ")";
}

Outcome combine(const std::vector<CheckResult>& checks) {
  Outcome o{true, ""};
  for (const CheckResult& r : checks) {
    o.pass = o.pass && r.passed;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += summarize(r);
    if (!r.passed) o.detail += " [" + r.detail + "]";
  }
  return o;
}

Outcome criterion_r0() {
  const double r_df = r0_hat(disease_free_example_params());
  const double r_en = r0_hat(endemic_example_params());
  const double thr = endemic_theorem_threshold(endemic_example_params());
  const double err_df = std::abs(r_df - 0.851);
  const double err_en = std::abs(r_en - 4.82271);
  const double err_thr = std::abs(thr - 4.1333);
  const bool pass = err_df <= 5e-4 && err_en / 4.82271 <= 1e-5 && err_thr <= 1e-4;
  return {pass, "df R0 = " + num(r_df) + " (|err| " + num(err_df) + "), endemic R0 = " +
                    num(r_en) + " (|err| " + num(err_en) + ", relative " +
                    num(err_en / 4.82271) + "), gamma/mu + 2 = " + num(thr)};
}

Outcome criterion_witness() {
  const ModelParams p = endemic_example_params();
  EnLyapParams lp = reference_en_params();
  const FeasibilityReport r = feasibility_report(p, lp);
  const double k_margin = r.k0 - lp.k;
  const double l3_margin = r.lambda3.bound;
  const double cc = r.corner.worst_margin;
  return {r.feasible() && k_margin > 0.0 && l3_margin > 0.0 && cc > 0.0,
          "k0 - k = " + num(k_margin) + ", lambda3 bound = " + num(l3_margin) +
              " (positive room for lambda3 > 0), the corner condition margin = " + num(cc)};
}

Outcome criterion_df_certification() {
  const DiseaseFreeLyapunov v = reference_df();
  return combine({check_df_grid_iss(v, 60, df_certification_inputs(v.model())),
                  check_df_continuity(v, 1000, kDefaultSeed)});
}

Outcome criterion_en_certification() {
  const EndemicLyapunov v = reference_en();
  const std::vector<Deviation> samples = sample_sublevel(v, 100000, kDefaultSeed);
  return combine({check_en_strict_decrease(v, samples), check_en_region_bounds(v, samples),
                  check_en_continuity(v, 200, kDefaultSeed + 1)});
}

Outcome criterion_trajectories() {
  std::vector<CheckResult> out;
  const DiseaseFreeLyapunov df = reference_df();
  MonotonicityOptions m;
  m.n_starts = 50;
  m.seed = kDefaultSeed;
  m.t_end = 50.0 / df.model().mu;
  m.final_tol = 1e-3;
  TrajectoryChecks t = check_trajectories(LyapunovFunction{df}, m);
  t.monotonicity.name = "df_" + t.monotonicity.name;
  t.convergence.name = "df_" + t.convergence.name;
  out.push_back(t.monotonicity);
  out.push_back(t.convergence);
  const EndemicLyapunov en = reference_en();
  m.t_end = 50.0 / en.model().mu;
  m.final_tol = 1e-2;
  t = check_trajectories(LyapunovFunction{en}, m);
  t.monotonicity.name = "endemic_" + t.monotonicity.name;
  t.convergence.name = "endemic_" + t.convergence.name;
  out.push_back(t.monotonicity);
  out.push_back(t.convergence);
  return combine(out);
}

Outcome criterion_iss() {
  std::vector<CheckResult> out;
  const DiseaseFreeLyapunov df = reference_df();
  const ModelParams& pd = df.model();
  IssOptions iss{State{100.0, 50.0, 0.0}, 50.0 / pd.mu, kDefaultDt, 0.2};
  for (double f : {0.5, -0.5, 1.0, -1.0, 2.0, -2.0}) {
    const double u = f * pd.b_hat / 10.0;
    CheckResult r = check_iss_bound(LyapunovFunction{df}, StepInput{0.0, pd.b_hat, pd.b_hat + u}, iss);
    r.name = "df_step_" + num(u);
    out.push_back(r);
  }
  for (double f : {0.5, 1.0}) {
    CheckResult r = check_iss_gain_linearity(LyapunovFunction{df}, f * pd.b_hat / 10.0, iss);
    r.name = "df_linearity_" + num(f * pd.b_hat / 10.0);
    out.push_back(r);
  }
  const EndemicLyapunov en = reference_en();
  const ModelParams& pe = en.model();
  const Interval range = en.input_range();
  IssOptions ie{state_from(en.equilibrium(), Deviation{50.0, 20.0, 100.0}), 50.0 / pe.mu,
                kDefaultDt, 0.2};
  for (double u : {0.5 * range.hi, 0.9 * range.hi, 0.5 * range.lo, 0.9 * range.lo}) {
    const InputSignal sig = StepInput{0.0, pe.b_hat, pe.b_hat + u};
    CheckResult inv = check_forward_invariance(en, sig, ie);
    inv.name = "endemic_invariance_" + num(u);
    out.push_back(inv);
    CheckResult b = check_iss_bound(LyapunovFunction{en}, sig, ie);
    b.name = "endemic_bound_" + num(u);
    out.push_back(b);
  }
  return combine(out);
}

Outcome criterion_nesting() {
  const ModelParams p = endemic_example_params();
  std::vector<CheckResult> out;
  NestingSpec spec;
  spec.base = reference_en_params();
  spec.level = spec.base.l_bar;
  spec.samples = 10000;
  spec.seed = kDefaultSeed;
  spec.axis = NestingAxis::LambdaHat2;
  for (auto [a, b] : {std::pair{0.005, 0.01}, std::pair{0.001, 0.008}}) {
    spec.a = a;
    spec.b = b;
    CheckResult r = check_sublevel_nesting(p, spec);
    r.name += "(" + num(a) + "," + num(b) + ")";
    out.push_back(r);
  }
  spec.axis = NestingAxis::K;
  for (auto [a, b] : {std::pair{0.045, 0.0902}, std::pair{0.02, 0.15}}) {
    spec.a = a;
    spec.b = b;
    CheckResult r = check_sublevel_nesting(p, spec);
    r.name += "(" + num(a) + "," + num(b) + ")";
    out.push_back(r);
  }
  Outcome o = combine(out);
  for (const CheckResult& r : out) {
    if (r.detail.find("violations: 0") == std::string::npos) o.pass = false;
  }
  return o;
}

Outcome criterion_bifurcation() {
  const ModelParams p = disease_free_example_params();
  const CheckResult r = check_bifurcation_continuity(p, bifurcation_grid(p, 21));
  return {r.passed, summarize(r) + " [" + r.detail + "]"};
}

Outcome criterion_obstructions() {
  const ModelParams p = endemic_example_params();
  return combine({separability_obstruction_demo(p),
                  prohibited_region_demo(p, State{100.0, 0.01, 0.0}, {20.0, 340.0, 1000.0, 1e4},
                                         50.0 / p.mu)});
}

bool inside(const Polyline& loop, const Point2& q) {
  bool in = false;
  for (std::size_t i = 0, j = loop.size() - 1; i < loop.size(); j = i++) {
    const Point2& a = loop[i];
    const Point2& b = loop[j];
    if ((a.v > q.v) != (b.v > q.v) && q.u < (b.u - a.u) * (q.v - a.v) / (b.v - a.v) + a.u) {
      in = !in;
    }
  }
  return in;
}

Outcome criterion_levelsets() {
  const DiseaseFreeLyapunov df = reference_df();
  const Resolution res{800, 800};
  const Window w1{-200.0, 600.0, 0.0, 600.0};
  const double cell1 = std::max((w1.u_max - w1.u_min) / res.nu, (w1.v_max - w1.v_min) / res.nv);
  const std::vector<double> fig1 = {10, 30, 60, 100, 180, 260, 340, 420, 500};
  double worst1 = 0.0;
  bool pass = true;
  for (const Contour& c : extract_contours(LyapunovFunction{df}, fig1, Plane{}, w1, res)) {
    const Contour exact = analytic_contour_df(df, c.level);
    if (c.polylines.empty()) pass = false;
    for (const Polyline& line : c.polylines) {
      for (const Point2& q : line) worst1 = std::max(worst1, distance_to_contour(exact, q));
    }
  }
  pass = pass && worst1 <= 2.0 * cell1;

  const EndemicLyapunov en = reference_en();
  const State& xh = en.equilibrium().point;
  const Window w2{-xh.s, 400.0, -0.98 * xh.i, 420.0};
  const std::vector<double> fig2 = {20, 100, 180, 260, 340};
  const auto cs = extract_contours(LyapunovFunction{en}, fig2, Plane{}, w2, res);
  std::size_t closed = 0;
  bool nested = true;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].polylines.size() == 1 && is_closed(cs[i].polylines[0], 1e-9)) ++closed;
    if (i > 0) {
      if (contours_cross(cs[i - 1], cs[i])) nested = false;
      if (cs[i].polylines.empty() || cs[i - 1].polylines.empty() ||
          !inside(cs[i].polylines[0], cs[i - 1].polylines[0].front())) {
        nested = false;
      }
    }
    if (!cs[i].polylines.empty() && !inside(cs[i].polylines[0], Point2{0.0, 0.0})) nested = false;
  }
  pass = pass && closed == fig2.size() && nested;
  return {pass, "fig1 max distance to analytic contour " + num(worst1) + " (2 cells = " +
                    num(2.0 * cell1) + "); fig2 closed loops " + std::to_string(closed) + "/" +
                    std::to_string(fig2.size()) + ", nested " + (nested ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"1 R0 reproduction", criterion_r0},
      {"2 feasibility witness", criterion_witness},
      {"3 disease-free certification", criterion_df_certification},
      {"4 endemic certification", criterion_en_certification},
      {"5 trajectory monotonicity", criterion_trajectories},
      {"6 ISS bound", criterion_iss},
      {"7 sublevel nesting", criterion_nesting},
      {"8 bifurcation continuity", criterion_bifurcation},
      {"9 obstruction demos", criterion_obstructions},
      {"10 level sets", criterion_levelsets},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s  %-30s %.1fs  %s\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
