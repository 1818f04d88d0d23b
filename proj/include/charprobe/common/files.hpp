#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace charprobe {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string read_file(const fs::path& path);
std::vector<std::string> read_lines(const fs::path& path);

// Writes through a sibling temp file and renames, so readers never see a
// half-written file. Always binary mode ("\n" line endings on every OS).
void write_file(const fs::path& path, std::string_view content);

struct JsonLine {
  std::size_t line_no = 0;
  json value;
};

struct JsonlReadResult {
  std::vector<JsonLine> records;
  std::vector<std::string> errors;  // "file:line: message"
};

// Blank lines are ignored; lines that fail to parse are reported, not fatal.
JsonlReadResult read_jsonl(const fs::path& path);
std::string to_jsonl(const std::vector<json>& records);

}  // namespace charprobe
