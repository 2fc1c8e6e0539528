#pragma once

#include <iosfwd>

#include <json.hpp>

#include "fraclat/config.hpp"

namespace fraclat::app {

// Exit codes.
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int unstable = 2;

// Dispatches one command. Files go to config.output_dir; `out` receives the
// classify JSON; `err` gets diagnostics and the list of written files.
int run(const config::RunConfig& config, std::ostream& out, std::ostream& err);

nlohmann::ordered_json config_echo(const config::RunConfig& config);

}  // namespace fraclat::app
