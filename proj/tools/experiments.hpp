#pragma once

#include <cstdint>
#include <string>

#include "config.hpp"

namespace semirev::cli {

struct RunContext {
  Config config;
  std::string out_dir;
  int threads = 1;
  uint64_t seed = 0;
};

// exit codes: 0 ok, 2 config error, 3 numerical non-convergence,
// 4 aggregation conflict
int cmd_profile(const RunContext& ctx);
int cmd_resolvent_scan(const RunContext& ctx);
int cmd_quasimode_check(const RunContext& ctx);
int cmd_evolve(const RunContext& ctx);
int cmd_saturate(const RunContext& ctx);
int cmd_report(const RunContext& ctx);

}  // namespace semirev::cli
