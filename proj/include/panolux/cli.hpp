// Copyright 2026 The Panolux Authors
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

#pragma once

#include <ostream>
#include <span>
#include <string>

namespace panolux::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

/// Runs `panolux <command> [flags]` in-process. JSON results go to `out`,
/// diagnostics to `err`. Returns 0 on success, 2 for input errors and 3 for
/// numerical failures.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace panolux::cli
