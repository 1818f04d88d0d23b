#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace testsupport {

namespace fs = std::filesystem;

inline fs::path fixtures() { return CHARPROBE_FIXTURES; }
inline fs::path golden() { return CHARPROBE_GOLDEN; }
inline fs::path data_dir() { return CHARPROBE_TEST_DATA_DIR; }

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const fs::path& p, const std::string& s) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << s;
}

inline std::vector<nlohmann::json> read_jsonl(const fs::path& p) {
  std::vector<nlohmann::json> out;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = fs::temp_directory_path() /
            ("charprobe-" + tag + "-" + std::to_string(stamp) + "-" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  operator const fs::path&() const { return path_; }
  fs::path operator/(const std::string& s) const { return path_ / s; }

 private:
  fs::path path_;
};

// Copies a fixture directory into dir (flat).
inline void copy_fixture(const std::string& name, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& e : fs::directory_iterator(fixtures() / name)) {
    fs::copy(e.path(), dir / e.path().filename(), fs::copy_options::recursive | fs::copy_options::overwrite_existing);
  }
}

// Independent reference implementations used as test oracles.
namespace oracle {

using Point = std::vector<double>;

inline double sqdist(const Point& a, const Point& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Within-cluster sum of squares of a labelling.
inline double wcss(const std::vector<Point>& x, const std::vector<int>& labels, int k) {
  const std::size_t d = x.front().size();
  std::vector<Point> mean(k, Point(d, 0.0));
  std::vector<int> count(k, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    ++count[labels[i]];
    for (std::size_t j = 0; j < d; ++j) mean[labels[i]][j] += x[i][j];
  }
  for (int c = 0; c < k; ++c) {
    for (auto& v : mean[c]) v /= count[c] ? count[c] : 1;
  }
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += sqdist(x[i], mean[labels[i]]);
  return s;
}

// Minimum wcss over every labelling with k non-empty clusters.
inline double optimal_wcss(const std::vector<Point>& x, int k) {
  const std::size_t n = x.size();
  std::vector<int> labels(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<int> used(k, 0);
    for (int l : labels) used[l] = 1;
    bool all = true;
    for (int u : used) all = all && u;
    if (all) best = std::min(best, wcss(x, labels, k));
    std::size_t i = 0;
    while (i < n && ++labels[i] == k) labels[i++] = 0;
    if (i == n) break;
  }
  return best;
}

inline double silhouette(const std::vector<Point>& x, const std::vector<int>& labels, int k) {
  double total = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<double> sum(k, 0.0);
    std::vector<int> cnt(k, 0);
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j == i) continue;
      sum[labels[j]] += std::sqrt(sqdist(x[i], x[j]));
      ++cnt[labels[j]];
    }
    const int own = labels[i];
    if (cnt[own] == 0) continue;  // singleton scores 0
    const double a = sum[own] / cnt[own];
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c != own && cnt[c] > 0) b = std::min(b, sum[c] / cnt[c]);
    }
    total += (b - a) / std::max(a, b);
  }
  return total / static_cast<double>(x.size());
}

inline double calinski_harabasz(const std::vector<Point>& x, const std::vector<int>& labels, int k) {
  const std::size_t n = x.size(), d = x.front().size();
  Point all(d, 0.0);
  for (const auto& p : x) {
    for (std::size_t j = 0; j < d; ++j) all[j] += p[j] / static_cast<double>(n);
  }
  std::vector<Point> mean(k, Point(d, 0.0));
  std::vector<int> count(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++count[labels[i]];
    for (std::size_t j = 0; j < d; ++j) mean[labels[i]][j] += x[i][j];
  }
  int nonempty = 0;
  double between = 0;
  for (int c = 0; c < k; ++c) {
    if (!count[c]) continue;
    ++nonempty;
    for (auto& v : mean[c]) v /= count[c];
    between += count[c] * sqdist(mean[c], all);
  }
  double within = 0;
  for (std::size_t i = 0; i < n; ++i) within += sqdist(x[i], mean[labels[i]]);
  return (between / (nonempty - 1)) / (within / static_cast<double>(n - nonempty));
}

inline double kappa(const std::vector<bool>& a, const std::vector<bool>& b) {
  double agree = 0, a_true = 0, b_true = 0;
  const double n = static_cast<double>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    agree += a[i] == b[i];
    a_true += a[i];
    b_true += b[i];
  }
  const double po = agree / n;
  const double pe = (a_true / n) * (b_true / n) + (1 - a_true / n) * (1 - b_true / n);
  return (po - pe) / (1 - pe);
}

}  // namespace oracle

}  // namespace testsupport
