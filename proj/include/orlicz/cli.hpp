#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "orlicz/config.hpp"

namespace orlicz {

// Exit codes shared by every command.
enum ExitCode : int { exit_ok = 0, exit_precondition = 1, exit_config = 2, exit_flow_failure = 3 };

int cmd_check(const RunConfig& config, std::ostream& out);
int cmd_solve(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& out,
              std::ostream& err);
int cmd_uniqueness(const RunConfig& config, const std::vector<BodySpec>& bodies, std::ostream& out,
                   std::ostream& err);
int cmd_oracle(const RunConfig& config, std::ostream& out, std::ostream& err);

// Artifact writers used by cmd_solve.
void write_trace_csv(std::ostream& out, const FlowTrace& trace);
void write_series(std::ostream& out, const FlowTrace& trace, bool residual);

}  // namespace orlicz
