#pragma once

#include <iosfwd>

#include "cdkit_cli/config.hpp"

namespace cdkit::cli {

/// Each command takes a resolved config, writes its outputs plus a copy of
/// the config next to them, reports to `out` and returns an exit code.
/// Errors are thrown.
int cmd_generate(const Json& cfg, std::ostream& out);
int cmd_pretrain(const Json& cfg, std::ostream& out);
int cmd_infer(const Json& cfg, std::ostream& out);
int cmd_eval(const Json& cfg, std::ostream& out);
int cmd_bench(const Json& cfg, std::ostream& out);

int run_command(Command c, const Json& cfg, std::ostream& out);

extern const char* const kTimingHeader;

}  // namespace cdkit::cli
