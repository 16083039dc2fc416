#include "sirlyap/json_io.hpp"

#include <algorithm>
#include <cmath>

#include "sirlyap/errors.hpp"

namespace sirlyap {
namespace {

using nlohmann::json;

double get_number(const json& j, const char* key, std::string_view where) {
  if (!j.contains(key)) {
    throw ConfigError(std::string(where) + ": missing key '" + key + "'");
  }
  const json& v = j.at(key);
  if (!v.is_number()) {
    throw ConfigError(std::string(where) + ": key '" + key + "' must be a number");
  }
  return v.get<double>();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void require_known_keys(const json& j,
                        std::initializer_list<std::string_view> allowed,
                        std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ConfigError(std::string(where) + ": unknown key '" + item.key() + "'");
    }
  }
}

void to_json(json& j, const ModelParams& p) {
  j = json{{"beta", p.beta}, {"gamma", p.gamma}, {"mu", p.mu}, {"b_hat", p.b_hat}};
}

void from_json(const json& j, ModelParams& p) {
  require_known_keys(j, {"beta", "gamma", "mu", "b_hat"}, "model");
  p.beta = get_number(j, "beta", "model");
  p.gamma = get_number(j, "gamma", "model");
  p.mu = get_number(j, "mu", "model");
  p.b_hat = get_number(j, "b_hat", "model");
}

void to_json(json& j, const State& x) { j = json{{"s", x.s}, {"i", x.i}, {"r", x.r}}; }

void from_json(const json& j, State& x) {
  require_known_keys(j, {"s", "i", "r"}, "state");
  x.s = get_number(j, "s", "state");
  x.i = get_number(j, "i", "state");
  x.r = get_number(j, "r", "state");
}

void to_json(json& j, const Deviation& d) {
  j = json{{"x1t", d.x1}, {"x2t", d.x2}, {"x3t", d.x3}};
}

void to_json(json& j, const DfLyapParams& lp) {
  j = json{{"mu0", lp.mu0},         {"eps", lp.eps},     {"gamma0", lp.gamma0},
           {"lambda3", lp.lambda3}, {"delta", lp.delta}};
}

void from_json(const json& j, DfLyapParams& lp) {
  require_known_keys(j, {"mu0", "eps", "gamma0", "lambda3", "delta"}, "df_lyap_params");
  lp.mu0 = get_number(j, "mu0", "df_lyap_params");
  lp.eps = get_number(j, "eps", "df_lyap_params");
  lp.gamma0 = get_number(j, "gamma0", "df_lyap_params");
  lp.lambda3 = get_number(j, "lambda3", "df_lyap_params");
  lp.delta = get_number(j, "delta", "df_lyap_params");
}

void to_json(json& j, const EnLyapParams& lp) {
  j = json{{"lambda1", lp.lambda1}, {"lambda2", lp.lambda2},
           {"lambda_hat2", lp.lambda_hat2}, {"k", lp.k},
           {"lambda3", lp.lambda3}, {"l_bar", lp.l_bar},
           {"delta", lp.delta}};
}

void from_json(const json& j, EnLyapParams& lp) {
  constexpr std::string_view where = "en_lyap_params";
  require_known_keys(j, {"lambda1", "lambda2", "lambda_hat2", "k", "lambda3", "l_bar", "delta"},
                     where);
  lp.lambda1 = get_number(j, "lambda1", where);
  lp.lambda2 = get_number(j, "lambda2", where);
  lp.lambda_hat2 = get_number(j, "lambda_hat2", where);
  lp.k = get_number(j, "k", where);
  lp.lambda3 = get_number(j, "lambda3", where);
  lp.l_bar = get_number(j, "l_bar", where);
  lp.delta = get_number(j, "delta", where);
}

void to_json(json& j, const InputSignal& sig) {
  if (const auto* c = std::get_if<ConstantInput>(&sig)) {
    j = json{{"type", "constant"}, {"value", c->value}};
  } else if (const auto* s = std::get_if<StepInput>(&sig)) {
    j = json{{"type", "step"}, {"t_switch", s->t_switch}, {"before", s->before},
             {"after", s->after}};
  } else if (const auto* pw = std::get_if<PiecewiseInput>(&sig)) {
    json knots = json::array();
    for (const auto& [t, c] : pw->knots) knots.push_back(json::array({t, c}));
    j = json{{"type", "piecewise"}, {"knots", knots}};
  } else {
    const auto& sn = std::get<SinusoidInput>(sig);
    j = json{{"type", "sinusoid"}, {"mean", sn.mean}, {"amplitude", sn.amplitude},
             {"omega", sn.omega}};
  }
}

void from_json(const json& j, InputSignal& sig) {
  constexpr std::string_view where = "signal";
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ConfigError("signal: expected an object with a string 'type'");
  }
  const std::string type = j.at("type").get<std::string>();
  if (type == "constant") {
    require_known_keys(j, {"type", "value"}, where);
    sig = ConstantInput{get_number(j, "value", where)};
  } else if (type == "step") {
    require_known_keys(j, {"type", "t_switch", "before", "after"}, where);
    sig = StepInput{get_number(j, "t_switch", where), get_number(j, "before", where),
                    get_number(j, "after", where)};
  } else if (type == "piecewise") {
    require_known_keys(j, {"type", "knots"}, where);
    if (!j.contains("knots") || !j.at("knots").is_array()) {
      throw ConfigError("signal: piecewise needs a 'knots' array");
    }
    PiecewiseInput pw;
    for (const json& knot : j.at("knots")) {
      if (!knot.is_array() || knot.size() != 2 || !knot[0].is_number() ||
          !knot[1].is_number()) {
        throw ConfigError("signal: each knot must be a [t, value] pair");
      }
      pw.knots.emplace_back(knot[0].get<double>(), knot[1].get<double>());
    }
    sig = pw;
  } else if (type == "sinusoid") {
    require_known_keys(j, {"type", "mean", "amplitude", "omega"}, where);
    sig = SinusoidInput{get_number(j, "mean", where), get_number(j, "amplitude", where),
                        get_number(j, "omega", where)};
  } else {
    throw ConfigError("signal: unknown type '" + type + "'");
  }
  try {
    validate(sig);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("signal: ") + e.what());
  }
}

void to_json(json& j, const FeasibilityReport& r) {
  j = json{{"k0", r.k0},
           {"lambda3_bound", r.lambda3.bound},
           {"lambda3_bound_terms", r.lambda3.raw_terms},
           {"lambda3_bound_third_with_k", r.lambda3.corrected_third},
           {"corner_margin", r.corner.worst_margin},
           {"corner_argmin_l", r.corner.argmin_l},
           {"corner_margin_at_zero", r.corner.margin_at_zero},
           {"corner_holds", r.corner.holds},
           {"input_range", json::array({r.input_range.lo, r.input_range.hi})},
           {"feasible", r.feasible()}};
}

void to_json(json& j, const CheckResult& r) {
  json where = nullptr;
  if (const auto* d = std::get_if<Deviation>(&r.worst_location)) {
    where = *d;
  } else if (const auto* t = std::get_if<double>(&r.worst_location)) {
    where = json{{"t", *t}};
  }
  j = json{{"name", r.name},
           {"passed", r.passed},
           {"worst_margin", number_or_null(r.worst_margin)},
           {"tolerance", r.tolerance},
           {"worst_location", where},
           {"samples", r.samples},
           {"detail", r.detail}};
}

void to_json(json& j, const VerificationReport& r) {
  j = json{{"all_passed", r.all_passed()}, {"checks", r.checks}};
}

}  // namespace sirlyap
