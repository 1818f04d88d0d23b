#include "charprobe/clusterlab/kmeans.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "charprobe/common/error.hpp"

namespace charprobe::clusterlab {

namespace {

// Every kernel takes `par`; with par == false the OpenMP pragmas are
// inactive and the code is the serial reference. Per-point values go into
// arrays and are summed in index order afterwards, so both paths agree
// bit for bit.

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void check_shapes(const Matrix& x, const std::vector<std::size_t>& assignments) {
  if (assignments.size() != x.rows()) {
    throw Error(ErrorCode::ShapeMismatch, std::to_string(assignments.size()) + " assignments for " +
                                              std::to_string(x.rows()) + " points");
  }
}

std::size_t cluster_count(const std::vector<std::size_t>& assignments) {
  std::size_t k = 0;
  for (auto a : assignments) k = std::max(k, a + 1);
  return k;
}

double sum_in_order(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// Nearest centroid per point (lower id on ties) and its squared distance.
void assign(const Matrix& x, const Matrix& c, std::vector<std::size_t>& labels, std::vector<double>& d2, bool par) {
  const auto n = static_cast<std::ptrdiff_t>(x.rows());
#pragma omp parallel for schedule(static) if (par)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto p = x.row(static_cast<std::size_t>(i));
    std::size_t best = 0;
    double best_d = squared_distance(p, c.row(0));
    for (std::size_t j = 1; j < c.rows(); ++j) {
      const double d = squared_distance(p, c.row(j));
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    labels[static_cast<std::size_t>(i)] = best;
    d2[static_cast<std::size_t>(i)] = best_d;
  }
}

// Gives each empty cluster the point farthest from its centroid, taken
// from a cluster that keeps at least one member.
void repair_empty(const Matrix& x, Matrix& c, std::vector<std::size_t>& labels, std::vector<double>& d2) {
  std::vector<std::size_t> sizes(c.rows(), 0);
  for (auto l : labels) ++sizes[l];
  for (std::size_t j = 0; j < c.rows(); ++j) {
    if (sizes[j] != 0) continue;
    std::size_t pick = x.rows();
    double far = -1.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      if (sizes[labels[i]] > 1 && d2[i] > far) {
        far = d2[i];
        pick = i;
      }
    }
    if (pick == x.rows()) throw Error(ErrorCode::TooFewPoints, "cannot fill empty cluster");
    --sizes[labels[pick]];
    labels[pick] = j;
    ++sizes[j];
    d2[pick] = 0.0;
    std::copy(x.row(pick).begin(), x.row(pick).end(), c.row(j).begin());
  }
}

Matrix kmeanspp(const Matrix& x, std::size_t k, std::mt19937_64& rng, bool par) {
  const std::size_t n = x.rows();
  Matrix c(k, x.cols());
  std::size_t first = std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
  std::copy(x.row(first).begin(), x.row(first).end(), c.row(0).begin());
  std::vector<double> d2(n);
  const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (par)
  for (std::ptrdiff_t i = 0; i < sn; ++i) {
    d2[static_cast<std::size_t>(i)] = squared_distance(x.row(static_cast<std::size_t>(i)), c.row(0));
  }
  for (std::size_t j = 1; j < k; ++j) {
    const double total = sum_in_order(d2);
    std::size_t pick = n - 1;
    if (total > 0.0) {
      const double r = uniform01(rng) * total;
      double cum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cum += d2[i];
        if (cum > r && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
    }
    std::copy(x.row(pick).begin(), x.row(pick).end(), c.row(j).begin());
#pragma omp parallel for schedule(static) if (par)
    for (std::ptrdiff_t i = 0; i < sn; ++i) {
      const auto u = static_cast<std::size_t>(i);
      d2[u] = std::min(d2[u], squared_distance(x.row(u), c.row(j)));
    }
  }
  return c;
}

ClusterReport lloyd(const Matrix& x, std::size_t k, std::uint64_t seed, int max_iter, double tol, bool par) {
  if (k == 0 || k > x.rows()) {
    throw Error(ErrorCode::TooFewPoints, "k=" + std::to_string(k) + " with " + std::to_string(x.rows()) + " points");
  }
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be >= 1");
  std::mt19937_64 rng(seed);
  ClusterReport rep;
  rep.k = k;
  rep.seed = seed;
  rep.centroids = kmeanspp(x, k, rng, par);
  const std::size_t n = x.rows();
  const std::size_t dim = x.cols();
  std::vector<std::size_t> labels(n);
  std::vector<double> d2(n);
  [[maybe_unused]] double prev = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= max_iter; ++iter) {
    assign(x, rep.centroids, labels, d2, par);
    repair_empty(x, rep.centroids, labels, d2);
    [[maybe_unused]] const double current = sum_in_order(d2);
    assert(current <= prev + 1e-9 * std::max(1.0, prev));
    prev = current;

    Matrix next(k, dim);
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto dst = next.row(labels[i]);
      const auto src = x.row(i);
      for (std::size_t d = 0; d < dim; ++d) dst[d] += src[d];
      ++sizes[labels[i]];
    }
    double shift = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      for (auto& v : next.row(j)) v /= static_cast<double>(sizes[j]);
      shift = std::max(shift, std::sqrt(squared_distance(next.row(j), rep.centroids.row(j))));
    }
    rep.centroids = std::move(next);
    rep.iterations = iter;
    if (shift < tol) {
      rep.converged = true;
      break;
    }
  }
  // Final assignment against the final centroids, so every point sits with
  // its nearest centroid and the distortion matches a recomputation.
  assign(x, rep.centroids, labels, d2, par);
  repair_empty(x, rep.centroids, labels, d2);
  rep.assignments = std::move(labels);
  rep.distortion = sum_in_order(d2);
  return rep;
}

ClusterReport best_of(const Matrix& x, std::size_t k, std::uint64_t seed, const KMeansOptions& opts, bool par) {
  if (opts.restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be >= 1");
  std::vector<ClusterReport> runs(static_cast<std::size_t>(opts.restarts));
  std::vector<std::exception_ptr> errors(runs.size());
  const auto r_n = static_cast<std::ptrdiff_t>(runs.size());
#pragma omp parallel for schedule(dynamic) if (par)
  for (std::ptrdiff_t r = 0; r < r_n; ++r) {
    const auto u = static_cast<std::size_t>(r);
    try {
      runs[u] = lloyd(x, k, seed + u, opts.max_iter, opts.tol, false);
    } catch (...) {
      errors[u] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].distortion < runs[best].distortion) best = r;
  }
  return std::move(runs[best]);
}

double distortion_impl(const Matrix& x, const std::vector<std::size_t>& assignments, const Matrix& c, bool par) {
  check_shapes(x, assignments);
  if (c.cols() != x.cols()) throw Error(ErrorCode::ShapeMismatch, "centroid dim differs from data dim");
  for (auto a : assignments) {
    if (a >= c.rows()) throw Error(ErrorCode::ShapeMismatch, "assignment " + std::to_string(a) + " out of range");
  }
  std::vector<double> d2(x.rows());
  const auto n = static_cast<std::ptrdiff_t>(x.rows());
#pragma omp parallel for schedule(static) if (par)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    d2[u] = squared_distance(x.row(u), c.row(assignments[u]));
  }
  return sum_in_order(d2);
}

double silhouette_impl(const Matrix& x, const std::vector<std::size_t>& assignments, bool par) {
  check_shapes(x, assignments);
  const std::size_t k = cluster_count(assignments);
  std::vector<std::size_t> sizes(k, 0);
  for (auto a : assignments) ++sizes[a];
  if (std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; }) < 2) {
    throw Error(ErrorCode::SingleCluster, "silhouette needs at least two clusters");
  }
  std::vector<double> s(x.rows(), 0.0);
  const auto n = static_cast<std::ptrdiff_t>(x.rows());
#pragma omp parallel for schedule(dynamic, 16) if (par)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    const auto own = assignments[u];
    if (sizes[own] == 1) continue;
    std::vector<double> sums(k, 0.0);
    for (std::size_t j = 0; j < x.rows(); ++j) {
      if (j != u) sums[assignments[j]] += std::sqrt(squared_distance(x.row(u), x.row(j)));
    }
    const double a = sums[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != own && sizes[c] > 0) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    }
    const double m = std::max(a, b);
    s[u] = m > 0.0 ? (b - a) / m : 0.0;
  }
  return sum_in_order(s) / static_cast<double>(x.rows());
}

double calinski_harabasz_impl(const Matrix& x, const std::vector<std::size_t>& assignments, bool par) {
  check_shapes(x, assignments);
  const std::size_t n = x.rows();
  const std::size_t dim = x.cols();
  const std::size_t slots = cluster_count(assignments);
  std::vector<std::size_t> sizes(slots, 0);
  for (auto a : assignments) ++sizes[a];
  const auto k = static_cast<std::size_t>(std::count_if(sizes.begin(), sizes.end(), [](auto s) { return s > 0; }));
  if (k < 2) throw Error(ErrorCode::SingleCluster, "Calinski-Harabasz needs at least two clusters");
  if (n <= k) throw Error(ErrorCode::TooFewPoints, "Calinski-Harabasz needs more points than clusters");

  Matrix c(slots, dim);
  std::vector<double> mean(dim, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto dst = c.row(assignments[i]);
    for (std::size_t d = 0; d < dim; ++d) {
      dst[d] += x(i, d);
      mean[d] += x(i, d);
    }
  }
  for (auto& v : mean) v /= static_cast<double>(n);
  for (std::size_t j = 0; j < slots; ++j) {
    if (sizes[j] == 0) continue;
    for (auto& v : c.row(j)) v /= static_cast<double>(sizes[j]);
  }
  double between = 0.0;
  for (std::size_t j = 0; j < slots; ++j) {
    if (sizes[j] > 0) between += static_cast<double>(sizes[j]) * squared_distance(c.row(j), mean);
  }
  const double within = distortion_impl(x, assignments, c, par);
  if (within == 0.0) return std::numeric_limits<double>::infinity();
  return (between / static_cast<double>(k - 1)) / (within / static_cast<double>(n - k));
}

}  // namespace

ClusterReport kmeans(const Matrix& x, std::size_t k, std::uint64_t seed, int max_iter, double tol) {
  return lloyd(x, k, seed, max_iter, tol, true);
}
ClusterReport kmeans_best(const Matrix& x, std::size_t k, std::uint64_t seed, const KMeansOptions& opts) {
  return best_of(x, k, seed, opts, true);
}
double distortion(const Matrix& x, const std::vector<std::size_t>& assignments, const Matrix& centroids) {
  return distortion_impl(x, assignments, centroids, true);
}
double silhouette(const Matrix& x, const std::vector<std::size_t>& assignments) {
  return silhouette_impl(x, assignments, true);
}
double calinski_harabasz(const Matrix& x, const std::vector<std::size_t>& assignments) {
  return calinski_harabasz_impl(x, assignments, true);
}

namespace serial {
ClusterReport kmeans(const Matrix& x, std::size_t k, std::uint64_t seed, int max_iter, double tol) {
  return lloyd(x, k, seed, max_iter, tol, false);
}
ClusterReport kmeans_best(const Matrix& x, std::size_t k, std::uint64_t seed, const KMeansOptions& opts) {
  return best_of(x, k, seed, opts, false);
}
double distortion(const Matrix& x, const std::vector<std::size_t>& assignments, const Matrix& centroids) {
  return distortion_impl(x, assignments, centroids, false);
}
double silhouette(const Matrix& x, const std::vector<std::size_t>& assignments) {
  return silhouette_impl(x, assignments, false);
}
double calinski_harabasz(const Matrix& x, const std::vector<std::size_t>& assignments) {
  return calinski_harabasz_impl(x, assignments, false);
}
}  // namespace serial

const ClusterReport& KSelection::chosen() const {
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i].k == chosen_k) return reports[i];
  }
  throw Error(ErrorCode::InvalidArgument, "no report for chosen k");
}

KSelection select_k(const Matrix& x, std::size_t k_min, std::size_t k_max, std::uint64_t seed,
                    const KMeansOptions& opts) {
  if (x.rows() < 3 || k_min < 2 || k_min > k_max || k_max > x.rows() - 1) {
    throw Error(ErrorCode::TooFewPoints, "k range " + std::to_string(k_min) + ".." + std::to_string(k_max) +
                                             " not within [2, " + std::to_string(x.rows() > 0 ? x.rows() - 1 : 0) +
                                             "]");
  }
  KSelection sel;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = k_min; k <= k_max; ++k) {
    auto rep = kmeans_best(x, k, seed, opts);
    rep.silhouette = silhouette(x, rep.assignments);
    rep.calinski_harabasz = calinski_harabasz(x, rep.assignments);
    sel.curve.push_back({k, rep.distortion, rep.silhouette, rep.calinski_harabasz});
    if (rep.silhouette > best) {
      best = rep.silhouette;
      sel.chosen_k = k;
    }
    sel.reports.push_back(std::move(rep));
  }
  return sel;
}

std::size_t Crosstab::total() const {
  std::size_t t = 0;
  for (auto s : cluster_sizes) t += s;
  return t;
}

Crosstab cluster_crosstab(const std::vector<std::size_t>& assignments, std::size_t k,
                          const std::vector<std::string>& labels) {
  if (labels.size() != assignments.size()) {
    throw Error(ErrorCode::CoverageGap, std::to_string(labels.size()) + " labels for " +
                                            std::to_string(assignments.size()) + " points");
  }
  std::set<std::string> distinct;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].empty()) throw Error(ErrorCode::CoverageGap, "point " + std::to_string(i) + " has no label");
    if (assignments[i] >= k) throw Error(ErrorCode::ShapeMismatch, "assignment out of range");
    distinct.insert(labels[i]);
  }
  Crosstab t;
  t.k = k;
  t.values.assign(distinct.begin(), distinct.end());
  std::map<std::string, std::size_t> col;
  for (std::size_t j = 0; j < t.values.size(); ++j) col[t.values[j]] = j;
  t.counts.assign(k, std::vector<std::size_t>(t.values.size(), 0));
  t.cluster_sizes.assign(k, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ++t.counts[assignments[i]][col[labels[i]]];
    ++t.cluster_sizes[assignments[i]];
  }
  return t;
}

}  // namespace charprobe::clusterlab
