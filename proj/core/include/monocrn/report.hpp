#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "monocrn/types.hpp"

namespace monocrn {

/// Evidence for a failed check: which sample, when, what was measured.
struct Witness {
    std::size_t sample = 0;
    double time = std::numeric_limits<double>::quiet_NaN();
    std::string quantity;
    double value = 0.0;
    std::vector<std::pair<std::string, Vec>> points;
};

/// Outcome of one verification procedure. The verdict is false exactly when
/// at least one witness was recorded.
struct VerificationReport {
    std::string test;
    bool verdict = true;
    std::size_t n_samples = 0;
    double max_violation = 0.0;
    std::vector<Witness> witnesses;
    std::map<std::string, double> metrics;
    std::vector<std::string> notes;

    void fail(Witness w) {
        verdict = false;
        witnesses.push_back(std::move(w));
    }
    void violation(double amount) {
        if (amount > max_violation) max_violation = amount;
    }
    /// Keeps the running minimum / maximum of a named metric.
    void metric_min(const std::string& key, double x);
    void metric_max(const std::string& key, double x);
};

nlohmann::json vec_to_json(const Vec& v);
Vec vec_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Witness& w);
nlohmann::json to_json(const VerificationReport& r);

/// Stable 64-bit FNV-1a hash rendered as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace monocrn
