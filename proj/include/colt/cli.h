// Copyright 2026 The colt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COLT_CLI_H_
#define COLT_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace colt {

// Subcommands: induce, evaluate, sample, gen-demos, run, case-study.
// Returns 0 on success, 1 on partial failure, 2 on invalid input.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace colt

#endif  // COLT_CLI_H_
