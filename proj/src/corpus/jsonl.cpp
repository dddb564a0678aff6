// SPDX-License-Identifier: Apache-2.0
#include "evidrank/jsonl.hpp"

#include <fstream>
#include <sstream>

#include "evidrank/error.hpp"

namespace evidrank {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IntegrityError("cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IntegrityError("cannot write " + tmp.string());
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
      throw IntegrityError("short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

void for_each_jsonl(std::string_view text, const std::string& source,
                    const std::function<void(const nlohmann::json&, std::size_t)>& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    auto line = text.substr(pos, end - pos);
    pos = end + 1;

    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(source, line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!record.is_object()) {
      throw ParseError(source, line_no, "record is not a JSON object");
    }
    fn(record, line_no);
    if (end == text.size()) break;
  }
}

std::string require_string(const nlohmann::json& record, const char* field,
                           const std::string& source, std::size_t line) {
  auto it = record.find(field);
  if (it == record.end() || !it->is_string()) {
    throw ParseError(source, line, std::string("missing or non-string field \"") + field + "\"");
  }
  return it->get<std::string>();
}

bool require_bool(const nlohmann::json& record, const char* field,
                  const std::string& source, std::size_t line) {
  auto it = record.find(field);
  if (it == record.end() || !it->is_boolean()) {
    throw ParseError(source, line, std::string("missing or non-boolean field \"") + field + "\"");
  }
  return it->get<bool>();
}

std::string dump_line(const nlohmann::json& record) {
  // nlohmann::json objects are std::map backed, so keys come out sorted.
  return record.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

}  // namespace evidrank
