#pragma once

#include <nlohmann/json.hpp>

#include "monocrn/convergence_lab.hpp"
#include "monocrn/extent_system.hpp"
#include "monocrn/linalg.hpp"
#include "monocrn/ode.hpp"

namespace monocrn {

/// Exact vectors serialize as arrays of strings ("1", "-1/2").
nlohmann::json to_json(const RationalVector& v);
nlohmann::json to_json(const HypothesisReport& r);
nlohmann::json to_json(const EquilibriumCertificate& c);
nlohmann::json to_json(const IntegratorConfig& c);

}  // namespace monocrn
