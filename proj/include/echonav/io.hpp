// Copyright 2026 The EchoNav Authors
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
#include <string>
#include <vector>

namespace echonav {

/// Formats a double so that parsing the text recovers the exact bit pattern.
std::string format_double(double v);

/// Writes via a temp file in the same directory followed by a rename, so an
/// interrupted run never leaves a partially written artifact.
void atomic_write_file(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

std::vector<std::string> split_lines(const std::string& text);
std::vector<std::string> split_csv_row(const std::string& line);

}  // namespace echonav
