#include <doctest.h>

#include <cmath>
#include <random>

#include "charprobe/clusterlab/kmeans.hpp"
#include "charprobe/clusterlab/matrix.hpp"
#include "charprobe/common/error.hpp"
#include "support/support.hpp"

using namespace charprobe;
using namespace charprobe::clusterlab;
namespace ts = testsupport;
namespace oracle = testsupport::oracle;

namespace {

std::vector<oracle::Point> random_points(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-10, 10);
  std::vector<oracle::Point> pts(n);
  for (auto& p : pts) p = {u(rng), u(rng)};
  return pts;
}

// Random labelling of n points into k clusters, none empty.
std::vector<int> random_labels(std::mt19937_64& rng, std::size_t n, int k) {
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = i < static_cast<std::size_t>(k) ? static_cast<int>(i) : static_cast<int>(rng() % k);
  std::shuffle(labels.begin(), labels.end(), rng);
  return labels;
}

std::vector<std::size_t> as_size(const std::vector<int>& v) { return {v.begin(), v.end()}; }

// Four well separated gaussian blobs in 5 dimensions.
Matrix blobs(std::mt19937_64& rng, std::size_t per_blob) {
  const std::vector<std::vector<double>> centers = {
      {0, 0, 0, 0, 0}, {10, 0, 0, 0, 0}, {0, 10, 0, 0, 0}, {0, 0, 10, 0, 0}};
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> rows;
  for (const auto& c : centers) {
    for (std::size_t i = 0; i < per_blob; ++i) {
      auto r = c;
      for (auto& x : r) x += g(rng);
      rows.push_back(r);
    }
  }
  std::shuffle(rows.begin(), rows.end(), rng);
  return Matrix::from_rows(rows);
}

}  // namespace

TEST_CASE("matrix helpers") {
  const auto m = Matrix::from_rows({{3, 4}, {0, 0}});
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(squared_distance(m.row(0), m.row(1)) == 25.0);
  const auto n = normalize_rows(m);
  CHECK(n(0, 0) == doctest::Approx(0.6));
  CHECK(n(1, 1) == 0.0);
  CHECK(m.to_rows() == std::vector<std::vector<double>>{{3, 4}, {0, 0}});
  CHECK_THROWS_AS(Matrix::from_rows({{1, 2}, {1}}), Error);
  ts::TempDir dir;
  ts::spit(dir / "m.csv", "# header\n1,2\n\n3.5,-4\n");
  const auto r = read_csv_matrix(dir / "m.csv");
  CHECK(r.rows() == 2);
  CHECK(r(1, 1) == -4.0);
  ts::spit(dir / "bad.csv", "1,2\n3\n");
  CHECK_THROWS_AS(read_csv_matrix(dir / "bad.csv"), Error);
}

TEST_CASE("best-of-25 k-means reaches the exhaustive optimum on 30 small instances") {
  std::mt19937_64 rng(5);
  for (int inst = 0; inst < 30; ++inst) {
    const std::size_t n = 4 + rng() % 5;
    const int k = 2 + static_cast<int>(rng() % 2);
    const auto pts = random_points(rng, n);
    const auto best = kmeans_best(Matrix::from_rows(pts), static_cast<std::size_t>(k), 100 + inst,
                                  {.max_iter = 300, .tol = 1e-9, .restarts = 25});
    const double opt = oracle::optimal_wcss(pts, k);
    INFO("instance " << inst << " n=" << n << " k=" << k);
    CHECK(best.distortion <= opt * (1 + 1e-6) + 1e-12);
    CHECK(best.distortion >= opt * (1 - 1e-9) - 1e-12);
    CHECK(best.assignments.size() == n);
    CHECK(distortion(Matrix::from_rows(pts), best.assignments, best.centroids) ==
          doctest::Approx(best.distortion).epsilon(1e-12));
  }
}

TEST_CASE("silhouette and Calinski-Harabasz match the oracles") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 5 + rng() % 20;
    const int k = 2 + static_cast<int>(rng() % 3);
    const auto pts = random_points(rng, n);
    const auto labels = random_labels(rng, n, k);
    const auto m = Matrix::from_rows(pts);
    CHECK(std::abs(silhouette(m, as_size(labels)) - oracle::silhouette(pts, labels, k)) < 1e-9);
    CHECK(std::abs(calinski_harabasz(m, as_size(labels)) - oracle::calinski_harabasz(pts, labels, k)) <
          1e-9 * std::max(1.0, oracle::calinski_harabasz(pts, labels, k)));
  }
}

TEST_CASE("metric edge cases") {
  const auto m = Matrix::from_rows({{0, 0}, {0, 0}, {5, 5}, {5, 5}});
  CHECK(std::isinf(calinski_harabasz(m, {0, 0, 1, 1})));
  CHECK(silhouette(m, {0, 0, 1, 1}) == 1.0);
  // Singleton cluster scores 0.
  const auto s = Matrix::from_rows({{0, 0}, {1, 0}, {10, 0}});
  CHECK(silhouette(s, {0, 0, 1}) ==
        doctest::Approx(oracle::silhouette({{0, 0}, {1, 0}, {10, 0}}, {0, 0, 1}, 2)).epsilon(1e-12));
  CHECK_THROWS_AS(silhouette(m, {0, 0, 0, 0}), Error);
  CHECK_THROWS_AS(calinski_harabasz(m, {0, 1, 2, 3}), Error);
  CHECK_THROWS_AS(kmeans(m, 0, 1), Error);
  try {
    kmeans(m, 5, 1);
    FAIL("expected TooFewPoints");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewPoints);
  }
}

TEST_CASE("k selection finds four blobs of 200 points in at least 19 of 20 trials") {
  int hits = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    std::mt19937_64 rng(1000 + t);
    const auto x = blobs(rng, 50);
    const auto sel = select_k(x, 2, 10, t, {.max_iter = 300, .tol = 1e-6, .restarts = 10});
    hits += sel.chosen_k == 4;
    CHECK(sel.curve.size() == 9);
    CHECK(sel.reports.size() == 9);
    CHECK(sel.chosen().k == sel.chosen_k);
  }
  CHECK(hits >= 19);
}

TEST_CASE("k selection picks the highest silhouette with ties to smaller k") {
  std::mt19937_64 rng(3);
  const auto x = blobs(rng, 10);
  const auto sel = select_k(x, 2, 6, 9);
  for (const auto& s : sel.curve) {
    const auto& chosen = sel.curve[sel.chosen_k - 2];
    CHECK(s.silhouette <= chosen.silhouette);
    if (s.silhouette == chosen.silhouette) CHECK(s.k >= sel.chosen_k);
  }
  CHECK_THROWS_AS(select_k(x, 1, 4), Error);
  CHECK_THROWS_AS(select_k(x, 2, 40), Error);
  CHECK_THROWS_AS(select_k(x, 5, 4), Error);
}

TEST_CASE("parallel kernels are bit-identical to the serial reference") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 10; ++i) {
    const auto x = blobs(rng, 30);
    const std::size_t k = 2 + static_cast<std::size_t>(i % 5);
    const KMeansOptions opts{.max_iter = 300, .tol = 1e-6, .restarts = 8};
    const auto p = kmeans_best(x, k, static_cast<std::uint64_t>(i), opts);
    const auto s = serial::kmeans_best(x, k, static_cast<std::uint64_t>(i), opts);
    CHECK(p.assignments == s.assignments);
    CHECK(p.centroids.to_rows() == s.centroids.to_rows());
    CHECK(p.distortion == s.distortion);
    CHECK(p.seed == s.seed);
    const auto one_p = kmeans(x, k, 7);
    const auto one_s = serial::kmeans(x, k, 7);
    CHECK(one_p.assignments == one_s.assignments);
    CHECK(one_p.iterations == one_s.iterations);
    CHECK(silhouette(x, p.assignments) == serial::silhouette(x, p.assignments));
    CHECK(calinski_harabasz(x, p.assignments) == serial::calinski_harabasz(x, p.assignments));
    CHECK(distortion(x, p.assignments, p.centroids) == serial::distortion(x, p.assignments, p.centroids));
  }
}

TEST_CASE("kmeans is deterministic for a seed") {
  std::mt19937_64 rng(8);
  const auto x = blobs(rng, 12);
  const auto a = kmeans(x, 4, 123), b = kmeans(x, 4, 123);
  CHECK(a.assignments == b.assignments);
  CHECK(a.distortion == b.distortion);
  CHECK(a.converged);
  CHECK(a.seed == 123);
}

TEST_CASE("cluster by label crosstab") {
  const auto ct = cluster_crosstab({0, 1, 1, 0, 2}, 3, {"pos", "neg", "pos", "pos", "neg"});
  CHECK(ct.values == std::vector<std::string>{"neg", "pos"});
  CHECK(ct.counts == std::vector<std::vector<std::size_t>>{{0, 2}, {1, 1}, {1, 0}});
  CHECK(ct.cluster_sizes == std::vector<std::size_t>{2, 2, 1});
  CHECK(ct.total() == 5);
  CHECK_THROWS_AS(cluster_crosstab({0, 1}, 2, {"a"}), Error);
  CHECK_THROWS_AS(cluster_crosstab({0, 1}, 2, {"a", ""}), Error);
}
