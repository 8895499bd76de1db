#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace coneforge {

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<double> tol;
    std::optional<std::int64_t> cone_cap;
};

// Executes one subcommand against a JSON config document. Artifacts land in
// the output directory. Returns 0 when every asserted bound passes, 1 on a
// verification failure, 2 on a configuration error.
int run(const std::string& subcommand, const std::string& config_json,
        const RunOverrides& overrides);

}  // namespace coneforge
