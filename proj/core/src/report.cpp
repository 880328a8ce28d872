#include "monocrn/report.hpp"

#include <cstdint>
#include <cstdio>

namespace monocrn {

void VerificationReport::metric_min(const std::string& key, double x) {
    auto [it, inserted] = metrics.emplace(key, x);
    if (!inserted && x < it->second) it->second = x;
}

void VerificationReport::metric_max(const std::string& key, double x) {
    auto [it, inserted] = metrics.emplace(key, x);
    if (!inserted && x > it->second) it->second = x;
}

nlohmann::json vec_to_json(const Vec& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Vec vec_from_json(const nlohmann::json& j) {
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
    return v;
}

namespace {

// JSON has no NaN/Inf; encode them as null.
nlohmann::json number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json to_json(const Witness& w) {
    nlohmann::json j;
    j["sample"] = w.sample;
    j["time"] = number(w.time);
    j["quantity"] = w.quantity;
    j["value"] = number(w.value);
    nlohmann::json pts = nlohmann::json::object();
    for (const auto& [name, x] : w.points) pts[name] = vec_to_json(x);
    j["points"] = pts;
    return j;
}

nlohmann::json to_json(const VerificationReport& r) {
    // Bounded witness list; the total count is kept separately.
    constexpr std::size_t kMaxWitnesses = 25;
    nlohmann::json j;
    j["test"] = r.test;
    j["verdict"] = r.verdict;
    j["n_samples"] = r.n_samples;
    j["max_violation"] = number(r.max_violation);
    j["n_witnesses"] = r.witnesses.size();
    nlohmann::json ws = nlohmann::json::array();
    for (std::size_t i = 0; i < r.witnesses.size() && i < kMaxWitnesses; ++i) ws.push_back(to_json(r.witnesses[i]));
    j["witnesses"] = ws;
    nlohmann::json ms = nlohmann::json::object();
    for (const auto& [k, v] : r.metrics) ms[k] = number(v);
    j["metrics"] = ms;
    j["notes"] = r.notes;
    return j;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace monocrn
