// Copyright 2026 The Tracefold Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TRACEFOLD_TOOLS_CLI_H_
#define TRACEFOLD_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <string>

namespace tracefold::cli {

enum ExitCode : int {
  kOk = 0,
  kVerifyFailed = 1,
  kMalformed = 2,
  kPrecondition = 3,
  kInternal = 4,
};

struct JobSpec {
  /// decompose, verify, moments, fold-local or demo-gamma.
  std::string command;
  /// Input file; empty means stdin for decompose and verify, and a seeded
  /// random instance for fold-local.
  std::string input;
  /// Output file; empty means the `out` stream.
  std::string output;
  /// Highest moment order reported.
  unsigned order = 9;
  bool stabilize = false;
  std::uint64_t seed = 1;
  /// Built-in moments input: "mediator" or "random".
  std::string demo;
};

/// Runs one job. Reports go to the output file or `out`; diagnostics go to
/// `err`.
int run_job(const JobSpec& job, std::ostream& out, std::ostream& err);

/// Parses argv into a JobSpec and runs it.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tracefold::cli

#endif  // TRACEFOLD_TOOLS_CLI_H_
