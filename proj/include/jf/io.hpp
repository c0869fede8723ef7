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

#include <filesystem>
#include <functional>
#include <string>

#include <json.hpp>

namespace jf::io {

using json = nlohmann::json;

std::string read_file(const std::filesystem::path& path);

// Write-temp-then-rename so partial output never lands under the final name.
void atomic_write(const std::filesystem::path& path, std::string_view content);

// Calls fn(line_number, parsed) for every nonempty line. Line numbers are
// 1-based. Parse failures raise ValidationError naming the line.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(size_t, const json&)>& fn);

// One record per line, keys sorted by nlohmann's object ordering, '\n'
// terminated. Deterministic bytes for identical records.
std::string to_jsonl(const std::vector<json>& records);

}  // namespace jf::io
