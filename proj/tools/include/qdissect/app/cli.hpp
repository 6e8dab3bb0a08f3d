// Copyright 2026 The qdissect Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef QDISSECT_APP_CLI_HPP
#define QDISSECT_APP_CLI_HPP

#include <ostream>

namespace qdissect::app {

/// Parses arguments, runs the subcommand and returns the exit code:
/// 0 success, 1 runtime failure, 2 usage or configuration error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qdissect::app

#endif  // QDISSECT_APP_CLI_HPP
