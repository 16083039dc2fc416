#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "sirlyap/lyap_df.hpp"
#include "sirlyap/lyap_en.hpp"
#include "sirlyap/model.hpp"
#include "sirlyap/ode.hpp"
#include "sirlyap/verify.hpp"

namespace sirlyap {

/// Throws ConfigError if `j` is not an object or has a key outside `allowed`.
void require_known_keys(const nlohmann::json& j,
                        std::initializer_list<std::string_view> allowed,
                        std::string_view where);

void to_json(nlohmann::json& j, const ModelParams& p);
void from_json(const nlohmann::json& j, ModelParams& p);

void to_json(nlohmann::json& j, const State& x);
void from_json(const nlohmann::json& j, State& x);

void to_json(nlohmann::json& j, const Deviation& d);

void to_json(nlohmann::json& j, const DfLyapParams& lp);
void from_json(const nlohmann::json& j, DfLyapParams& lp);

void to_json(nlohmann::json& j, const EnLyapParams& lp);
void from_json(const nlohmann::json& j, EnLyapParams& lp);

void to_json(nlohmann::json& j, const InputSignal& sig);
void from_json(const nlohmann::json& j, InputSignal& sig);

void to_json(nlohmann::json& j, const FeasibilityReport& r);
void to_json(nlohmann::json& j, const CheckResult& r);
void to_json(nlohmann::json& j, const VerificationReport& r);

}  // namespace sirlyap
