#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "charprobe/clusterlab/matrix.hpp"

namespace charprobe::clusterlab {

struct ClusterReport {
  std::size_t k = 0;
  std::vector<std::size_t> assignments;
  Matrix centroids;
  double distortion = 0.0;
  double silhouette = std::numeric_limits<double>::quiet_NaN();         // filled by select_k / callers
  double calinski_harabasz = std::numeric_limits<double>::quiet_NaN();  // ditto
  std::uint64_t seed = 0;
  int iterations = 0;
  bool converged = false;
};

struct KMeansOptions {
  int max_iter = 300;
  double tol = 1e-6;
  int restarts = 1;
};

// Lloyd iterations from a k-means++ start. Equidistant points go to the
// lower cluster id; an empty cluster takes the point farthest from its
// centroid. Throws TooFewPoints when k == 0 or k > rows.
ClusterReport kmeans(const Matrix& x, std::size_t k, std::uint64_t seed, int max_iter = 300, double tol = 1e-6);

// Best of opts.restarts runs with seeds seed, seed+1, ...; lowest distortion
// wins, ties to the earlier restart. Restarts run in parallel.
ClusterReport kmeans_best(const Matrix& x, std::size_t k, std::uint64_t seed, const KMeansOptions& opts = {});

// Sum of squared distances of each row to its assigned centroid.
double distortion(const Matrix& x, const std::vector<std::size_t>& assignments, const Matrix& centroids);

// Mean silhouette over all points, Euclidean distance. Points alone in
// their cluster score 0. Needs at least two non-empty clusters.
double silhouette(const Matrix& x, const std::vector<std::size_t>& assignments);

// (B / (k-1)) / (W / (n-k)); +inf when W == 0. Needs k >= 2 and n > k.
double calinski_harabasz(const Matrix& x, const std::vector<std::size_t>& assignments);

struct KScore {
  std::size_t k = 0;
  double distortion = 0.0;
  double silhouette = 0.0;
  double calinski_harabasz = 0.0;
};

struct KSelection {
  std::size_t chosen_k = 0;
  std::vector<KScore> curve;
  std::vector<ClusterReport> reports;  // parallel to curve
  const ClusterReport& chosen() const;
};

// Scores every k in [k_min, k_max] (must lie within [2, rows-1]) and picks
// the highest silhouette, ties to the smaller k.
KSelection select_k(const Matrix& x, std::size_t k_min = 2, std::size_t k_max = 10, std::uint64_t seed = 0,
                    const KMeansOptions& opts = {.max_iter = 300, .tol = 1e-6, .restarts = 25});

struct Crosstab {
  std::size_t k = 0;
  std::vector<std::string> values;                 // sorted label values
  std::vector<std::vector<std::size_t>> counts;    // [cluster][value]
  std::vector<std::size_t> cluster_sizes;
  std::size_t total() const;
};

// Counts per (cluster, label value). labels[i] belongs to row i; a size
// mismatch or an empty label is a CoverageGap.
Crosstab cluster_crosstab(const std::vector<std::size_t>& assignments, std::size_t k,
                          const std::vector<std::string>& labels);

// Single-threaded reference implementations of the kernels above. They
// produce bit-identical results and are kept for tests and benchmarks.
namespace serial {
ClusterReport kmeans(const Matrix& x, std::size_t k, std::uint64_t seed, int max_iter = 300, double tol = 1e-6);
ClusterReport kmeans_best(const Matrix& x, std::size_t k, std::uint64_t seed, const KMeansOptions& opts = {});
double distortion(const Matrix& x, const std::vector<std::size_t>& assignments, const Matrix& centroids);
double silhouette(const Matrix& x, const std::vector<std::size_t>& assignments);
double calinski_harabasz(const Matrix& x, const std::vector<std::size_t>& assignments);
}  // namespace serial

}  // namespace charprobe::clusterlab
