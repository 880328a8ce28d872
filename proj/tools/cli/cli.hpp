#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "monocrn/types.hpp"

namespace monocrn::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,  // parse error, missing file, bad arguments
    kVerdict = 3,
    kIntegration = 4,
};

struct RunConfig {
    std::string command;
    std::optional<std::string> example;
    std::optional<std::string> input;
    std::optional<std::vector<double>> sigma;
    std::vector<std::pair<std::string, double>> rate_overrides;
    std::optional<double> horizon;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    std::uint64_t seed = 42;
    std::string out_dir = "monocrn-out";
    std::vector<std::string> formats{"json", "csv"};
    bool reverse = false;
    std::vector<std::string> only;
    std::optional<std::string> golden;

    double effective_horizon() const;
    bool wants(const std::string& format) const;
};

/// Canonical description of everything that affects the results (the output
/// directory does not).
nlohmann::json config_json(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

/// Names accepted by --only.
const std::vector<std::string>& verify_test_names();

int cmd_analyze(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv, applies MONOCRN_OUT, dispatches, and maps exceptions to exit
/// codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace monocrn::cli
