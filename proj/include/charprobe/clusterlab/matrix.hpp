#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

namespace charprobe::clusterlab {

// Dense row-major matrix, one observation per row.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  // Throws DimensionMismatch on ragged input.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::vector<std::vector<double>> to_rows() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

// Scales every nonzero row to unit L2 norm.
Matrix normalize_rows(const Matrix& m);

// One vector per line, comma separated. Blank lines and '#' lines skipped.
Matrix read_csv_matrix(const std::filesystem::path& path);

}  // namespace charprobe::clusterlab
