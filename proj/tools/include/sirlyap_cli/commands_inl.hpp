#pragma once

#include <exception>
#include <ostream>

#include <nlohmann/json.hpp>

#include "sirlyap/errors.hpp"

namespace sirlyap::cli {

template <class Fn>
int run_guarded(Fn&& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const RegimeError& e) {
    err << "regime error: " << e.what() << '\n';
    return kExitRegime;
  } catch (const R0NotAboveOne& e) {
    err << "regime error: " << e.what() << '\n';
    return kExitRegime;
  } catch (const InfeasibleOverride& e) {
    err << "infeasible parameters: " << e.what() << '\n';
    return kExitRegime;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace sirlyap::cli
