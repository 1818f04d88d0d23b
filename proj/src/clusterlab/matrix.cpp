#include "charprobe/clusterlab/matrix.hpp"

#include <charconv>
#include <cmath>

#include "charprobe/common/error.hpp"
#include "charprobe/common/files.hpp"
#include "charprobe/common/text.hpp"

namespace charprobe::clusterlab {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) {
      throw Error(ErrorCode::DimensionMismatch, "row " + std::to_string(i) + " has " +
                                                    std::to_string(rows[i].size()) + " columns, expected " +
                                                    std::to_string(m.cols()));
    }
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < rows_; ++i) out.emplace_back(row(i).begin(), row(i).end());
  return out;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

Matrix normalize_rows(const Matrix& m) {
  Matrix out = m;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    double n = 0.0;
    for (double v : r) n += v * v;
    n = std::sqrt(n);
    if (n > 0.0) {
      for (auto& v : r) v /= n;
    }
  }
  return out;
}

Matrix read_csv_matrix(const std::filesystem::path& path) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  for (const auto& raw : read_lines(path)) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      auto comma = line.find(',', pos);
      if (comma == std::string::npos) comma = line.size();
      const auto cell = text::trim(std::string_view(line).substr(pos, comma - pos));
      double v = 0.0;
      auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (ec != std::errc() || p != cell.data() + cell.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::MalformedRecord,
                    path.string() + ":" + std::to_string(line_no) + ": bad number '" + cell + "'");
      }
      row.push_back(v);
      pos = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  return Matrix::from_rows(rows);
}

}  // namespace charprobe::clusterlab
