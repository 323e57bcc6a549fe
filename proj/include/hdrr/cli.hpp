// Copyright 2026 The HDRR Authors.
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

#ifndef HDRR_CLI_HPP_
#define HDRR_CLI_HPP_

#include <ostream>

namespace hdrr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// The `hdrr` command line. Subcommands: synth, train, eval, localize,
// gradcheck, scores. Usage errors return kExitUsage, runtime failures
// kExitFailure with the message on `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hdrr

#endif  // HDRR_CLI_HPP_
