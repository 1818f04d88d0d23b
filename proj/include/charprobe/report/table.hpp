#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace charprobe::report {

// One rendered cell. Numbers are formatted once, here, so every output
// format shows the same digits.
class Cell {
 public:
  static Cell text(std::string s);
  static Cell count(std::uint64_t n);
  static Cell number(double v, int decimals);
  static Cell number(const std::optional<double>& v, int decimals);
  static Cell absent();

  const std::string& str() const { return text_; }
  bool is_absent() const { return absent_; }
  bool is_text() const { return text_kind_; }

 private:
  std::string text_;
  bool absent_ = false;
  bool text_kind_ = false;
};

struct Table {
  std::string name;   // file stem, e.g. "sentiment_by_prompt"
  std::string title;
  std::string provenance;  // which inputs, backends and lexicons produced it
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct AbsentTable {
  std::string name;
  std::string reason;
};

struct ReportBundle {
  std::string run_id;
  std::vector<Table> tables;
  std::vector<AbsentTable> absent;
  std::vector<std::pair<std::string, std::string>> manifest;  // key, value in output order
};

std::string to_csv(const Table& t);
std::string to_markdown(const ReportBundle& b);
std::string manifest_text(const ReportBundle& b);

// Writes {dir}/{table}.csv, report.md and manifest.txt. With no tables only
// manifest.txt is written. Earlier outputs in dir are replaced. Returns the
// files written, in write order.
std::vector<std::filesystem::path> emit(const ReportBundle& b, const std::filesystem::path& dir);

}  // namespace charprobe::report
