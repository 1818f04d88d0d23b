#include "charprobe/report/table.hpp"

#include <cmath>

#include "charprobe/common/csv.hpp"
#include "charprobe/common/decimal.hpp"
#include "charprobe/common/digest.hpp"
#include "charprobe/common/error.hpp"
#include "charprobe/common/files.hpp"

namespace charprobe::report {

Cell Cell::text(std::string s) {
  Cell c;
  c.text_ = std::move(s);
  c.text_kind_ = true;
  return c;
}

Cell Cell::count(std::uint64_t n) {
  Cell c;
  c.text_ = std::to_string(n);
  return c;
}

Cell Cell::number(double v, int decimals) {
  if (std::isnan(v)) return absent();
  Cell c;
  c.text_ = std::isinf(v) ? (v > 0 ? "inf" : "-inf") : format_fixed(v, decimals);
  return c;
}

Cell Cell::number(const std::optional<double>& v, int decimals) { return v ? number(*v, decimals) : absent(); }

Cell Cell::absent() {
  Cell c;
  c.text_ = "n/a";
  c.absent_ = true;
  return c;
}

std::string to_csv(const Table& t) {
  std::string out = csv_row(t.columns);
  for (const auto& row : t.rows) {
    std::vector<std::string> fields;
    for (const auto& c : row) fields.push_back(c.str());
    out += csv_row(fields);
  }
  return out;
}

namespace {

std::string md_cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n') out += ' ';
    else out.push_back(c);
  }
  return out;
}

}  // namespace

std::string to_markdown(const ReportBundle& b) {
  std::string out = "# Report: " + b.run_id + "\n";
  for (const auto& t : b.tables) {
    out += "\n## " + t.title + "\n\n";
    out += "Table `" + t.name + "`. Source: " + t.provenance + "\n\n";
    out += "|";
    for (const auto& c : t.columns) out += " " + md_cell(c) + " |";
    out += "\n|";
    // Columns holding only numbers (or absent values) are right-aligned.
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      bool numeric = !t.rows.empty();
      for (const auto& row : t.rows) numeric = numeric && i < row.size() && !row[i].is_text();
      out += numeric ? " ---: |" : " --- |";
    }
    out += "\n";
    for (const auto& row : t.rows) {
      out += "|";
      for (const auto& c : row) out += " " + md_cell(c.str()) + " |";
      out += "\n";
    }
  }
  if (!b.absent.empty()) {
    out += "\n## Tables not produced\n\n";
    for (const auto& a : b.absent) out += "- `" + a.name + "`: " + a.reason + "\n";
  }
  return out;
}

std::string manifest_text(const ReportBundle& b) {
  std::string out = "run_id: " + b.run_id + "\n";
  for (const auto& [k, v] : b.manifest) out += k + ": " + v + "\n";
  out += "tables:\n";
  for (const auto& t : b.tables) out += "  " + t.name + ".csv " + sha256_hex(to_csv(t)) + "\n";
  for (const auto& a : b.absent) out += "  " + a.name + " absent: " + a.reason + "\n";
  return out;
}

std::vector<std::filesystem::path> emit(const ReportBundle& b, const std::filesystem::path& dir) {
  for (const auto& t : b.tables) {
    for (const auto& row : t.rows) {
      if (row.size() != t.columns.size()) {
        throw Error(ErrorCode::ShapeMismatch, "table " + t.name + " has a row of width " +
                                                  std::to_string(row.size()) + ", expected " +
                                                  std::to_string(t.columns.size()));
      }
    }
  }
  fs::create_directories(dir);
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() &&
        (entry.path().extension() == ".csv" || name == "report.md" || name == "manifest.txt")) {
      fs::remove(entry.path());
    }
  }
  std::vector<std::filesystem::path> written;
  for (const auto& t : b.tables) {
    written.push_back(dir / (t.name + ".csv"));
    write_file(written.back(), to_csv(t));
  }
  if (!b.tables.empty()) {
    written.push_back(dir / "report.md");
    write_file(written.back(), to_markdown(b));
  }
  written.push_back(dir / "manifest.txt");
  write_file(written.back(), manifest_text(b));
  return written;
}

}  // namespace charprobe::report
