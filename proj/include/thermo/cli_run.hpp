#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace thermo {

struct CliOptions {
  std::string subcommand;
  std::string config_path;  // optional for selftest
  std::string out_dir = ".";
  int workers = 0;  // 0 = THERMOLAB_WORKERS or hardware concurrency
  std::optional<std::uint64_t> seed;
};

// Exit codes: 0 success, 1 config/validation error, 2 numerical failure,
// 3 selftest failure.
int run_cli(const CliOptions& opt);

}  // namespace thermo
