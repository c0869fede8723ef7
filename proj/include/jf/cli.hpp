// Copyright 2026 The JudgeFuse Authors
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

#include <iosfwd>
#include <string>
#include <vector>

namespace jf::cli {

// Exit codes: 0 success, 2 validation failure, 3 backend failure,
// 4 internal invariant violation.
constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitBackend = 3;
constexpr int kExitInternal = 4;

// Runs one command; args excludes argv[0]. In-process entry point shared
// by the binary, the tests, and the acceptance pipeline.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace jf::cli
