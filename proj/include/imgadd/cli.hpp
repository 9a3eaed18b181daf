// SPDX-License-Identifier: Apache-2.0
//
// Copyright (c) 2026 The imgadd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <iosfwd>

namespace imgadd {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,      ///< bad arguments, unreadable or malformed files
  kExitNumerical = 2,  ///< divergence or non-finite values
};

/// Entry point of the `imgadd` tool: subcommands design, factorize, scan and
/// check-grad.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace imgadd
