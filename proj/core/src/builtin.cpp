#include "monocrn/builtin.hpp"

#include <cmath>

namespace monocrn::builtin {

const std::string_view kFutileCycleText =
    "# single-stage futile cycle\n"
    "species: P, Q, E, F, C, D\n"
    "E + P <-> C ; kf=1, kr=1\n"
    "C -> E + Q ; k=1\n"
    "F + Q <-> D ; kf=1, kr=1\n"
    "D -> F + P ; k=1\n";

ReactionNetwork futile_cycle() { return parse_network(std::string(kFutileCycleText)); }

Vec futile_cycle_sigma() {
    Vec s(6);
    s << 1, 0, 1, 1, 0, 0;
    return s;
}

Vec futile_cycle_equilibrium() {
    const double c = (7.0 - std::sqrt(41.0)) / 4.0;
    const double p = 2.0 * c / (1.0 - c);
    Vec z(6);
    z << p, p, 1.0 - c, 1.0 - c, c, c;
    return z;
}

ReactionNetwork a_to_b() { return parse_network("A -> B ; k=1\n"); }

Vec a_to_b_sigma() {
    Vec s(2);
    s << 1, 0;
    return s;
}

VectorField rotation() { return fields::rotation(); }

Vec rotation_v() { return Vec::Constant(2, 1.0 / std::sqrt(2.0)); }

std::vector<std::string> names() { return {"futile-cycle", "a-to-b", "rotation"}; }

std::optional<Example> find(std::string_view name) {
    Example ex;
    ex.name = std::string(name);
    if (name == "futile-cycle") {
        ex.network = futile_cycle();
        ex.sigma = futile_cycle_sigma();
    } else if (name == "a-to-b") {
        ex.network = a_to_b();
        ex.sigma = a_to_b_sigma();
    } else if (name == "rotation") {
        ex.field = rotation();
        ex.v = rotation_v();
    } else {
        return std::nullopt;
    }
    return ex;
}

}  // namespace monocrn::builtin
