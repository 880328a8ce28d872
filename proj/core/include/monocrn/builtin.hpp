#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "monocrn/crn_model.hpp"
#include "monocrn/vector_field.hpp"

namespace monocrn::builtin {

/// Network text of the single-stage futile cycle E+P <-> C -> E+Q,
/// F+Q <-> D -> F+P with every rate constant 1 and species order P,Q,E,F,C,D.
extern const std::string_view kFutileCycleText;

ReactionNetwork futile_cycle();
/// sigma = (1,0,1,1,0,0).
Vec futile_cycle_sigma();
/// Closed-form equilibrium for all k = 1 and the default sigma:
/// C = D = (7 - sqrt(41)) / 4, E = F = 1 - C, P = Q = 2C / (1 - C).
Vec futile_cycle_equilibrium();

ReactionNetwork a_to_b();
Vec a_to_b_sigma();

/// x' = (-x2, x1); not monotone for the standard orthant.
VectorField rotation();
Vec rotation_v();

/// A builtin is either a network with a default sigma or a bare field with v.
struct Example {
    std::string name;
    std::optional<ReactionNetwork> network;
    Vec sigma;
    std::optional<VectorField> field;
    Vec v;
};

std::vector<std::string> names();
/// nullopt for an unknown name.
std::optional<Example> find(std::string_view name);

}  // namespace monocrn::builtin
