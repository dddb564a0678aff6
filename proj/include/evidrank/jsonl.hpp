// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace evidrank {

std::string read_file(const std::filesystem::path& path);
/// Writes atomically enough for batch use: a temp file renamed into place.
void write_file(const std::filesystem::path& path, std::string_view contents);

/// Calls `fn(record, line_number)` for every non-blank line. Lines that fail
/// to parse, or are not JSON objects, raise ParseError with the 1-based line.
void for_each_jsonl(std::string_view text, const std::string& source,
                    const std::function<void(const nlohmann::json&, std::size_t)>& fn);

/// Field accessors that raise ParseError naming the field and line.
std::string require_string(const nlohmann::json& record, const char* field,
                           const std::string& source, std::size_t line);
bool require_bool(const nlohmann::json& record, const char* field,
                  const std::string& source, std::size_t line);

/// Compact, key-sorted single-line dump used for every artifact file.
std::string dump_line(const nlohmann::json& record);

}  // namespace evidrank
