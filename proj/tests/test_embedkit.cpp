#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "charprobe/common/error.hpp"
#include "charprobe/embedkit/embedding.hpp"
#include "support/support.hpp"

using namespace charprobe;
using namespace charprobe::embedkit;
namespace ts = testsupport;

namespace {

class FixedBackend : public EmbeddingBackend {
 public:
  explicit FixedBackend(std::vector<std::vector<double>> rows) : rows_(std::move(rows)) {}
  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) const override {
    ++calls;
    std::vector<EmbeddingVector> out;
    for (std::size_t i = 0; i < texts.size(); ++i) out.push_back({rows_[i % rows_.size()], tag()});
    return out;
  }
  std::string tag() const override { return "fixed"; }
  mutable std::atomic<int> calls{0};

 private:
  std::vector<std::vector<double>> rows_;
};

std::vector<EmbeddingVector> set_of(std::initializer_list<std::vector<double>> rows) {
  std::vector<EmbeddingVector> out;
  for (const auto& r : rows) out.push_back({r, "t"});
  return out;
}

std::vector<EmbeddingVector> random_set(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<EmbeddingVector> out(n);
  for (auto& v : out) {
    v.values.resize(dim);
    for (auto& x : v.values) x = g(rng);
  }
  return out;
}

std::vector<double> mean_of(const std::vector<EmbeddingVector>& s) {
  std::vector<double> m(s.front().dim(), 0.0);
  for (const auto& v : s)
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += v.values[i];
  for (auto& x : m) x /= static_cast<double>(s.size());
  return m;
}

double cosine_oracle(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
}

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("hash embedder is deterministic, unit length and seed dependent") {
  const HashEmbedder h(16, 0);
  const auto a = h.embed({"A kind leader", "a kind leader", "something else entirely"});
  REQUIRE(a.size() == 3);
  CHECK(a[0].dim() == 16);
  CHECK(a[0].values == a[1].values);
  CHECK(norm(a[0].values) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h.embed({"A kind leader"})[0].values == a[0].values);
  CHECK(HashEmbedder(16, 1).embed({"A kind leader"})[0].values != a[0].values);
  CHECK(h.tag() == "hash-embedder/d16/s0");
  CHECK_THROWS_AS(HashEmbedder(0), Error);
}

TEST_CASE("embed contract: empty input, dimension mismatch, non-finite values") {
  CHECK_THROWS_AS(embed(HashEmbedder(), {}), Error);
  const FixedBackend mixed({{1, 0}, {1, 0, 0}});
  try {
    embed(mixed, {"a", "b"});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  const FixedBackend nan({{1, std::nan("")}});
  CHECK_THROWS_AS(embed(nan, {"a"}), Error);
}

TEST_CASE("vector cache avoids repeat calls and persists across instances") {
  ts::TempDir dir;
  const auto path = dir / "cache.jsonl";
  const FixedBackend backend({{1, 2}, {3, 4}});
  {
    VectorCache cache(path);
    const auto first = embed(backend, {"x", "y"}, &cache);
    CHECK(backend.calls == 1);
    CHECK(cache.size() == 2);
    const auto again = embed(backend, {"x", "y"}, &cache);
    CHECK(backend.calls == 1);
    CHECK(again[1].values == first[1].values);
  }
  VectorCache reopened(path);
  CHECK(reopened.size() == 2);
  CHECK(*reopened.get("fixed", "y") == std::vector<double>{3, 4});
  CHECK_FALSE(reopened.get("other", "y").has_value());
  CHECK(VectorCache::key("a", "b") != VectorCache::key("a", "c"));
  CHECK(VectorCache::key("a", "bc") != VectorCache::key("ab", "c"));
}

TEST_CASE("http embedder batches requests") {
  httplib::Server server;
  std::atomic<int> requests{0};
  server.Post("/embed", [&](const httplib::Request& req, httplib::Response& res) {
    ++requests;
    const auto body = nlohmann::json::parse(req.body);
    nlohmann::json vectors = nlohmann::json::array();
    for (const auto& t : body["texts"]) vectors.push_back({static_cast<double>(t.get<std::string>().size()), 1.0});
    res.set_content(nlohmann::json{{"vectors", vectors}}.dump(), "application/json");
  });
  server.Post("/v2/embed", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"vectors":[[1,"x"]]})", "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  const auto base = "http://127.0.0.1:" + std::to_string(port);
  const HttpEmbedder http(base, std::chrono::seconds(5), 2);
  const auto out = embed(http, {"a", "bb", "ccc", "dddd", "eeeee"});
  CHECK(requests == 3);
  REQUIRE(out.size() == 5);
  CHECK(out[4].values == std::vector<double>{5, 1});
  CHECK(http.tag() == "http:" + base);
  CHECK_THROWS_AS(HttpEmbedder(base + "/v2").embed({"a"}), Error);
  server.stop();
  th.join();
  try {
    HttpEmbedder(base, std::chrono::milliseconds(300)).embed({"a"});
    FAIL("expected BackendUnreachable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BackendUnreachable);
  }
}

TEST_CASE("centroid and centroid distance errors") {
  CHECK_THROWS_AS(centroid({}), Error);
  CHECK_THROWS_AS(centroid(set_of({{1, 2}, {1}})), Error);
  CHECK_THROWS_AS(centroid_distance(set_of({{1, 2}}), set_of({{1, 2, 3}})), Error);
  try {
    centroid_distance(set_of({{1, 0}, {-1, 0}}), set_of({{1, 1}}));
    FAIL("expected ZeroCentroid");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroCentroid);
  }
  CHECK(centroid_distance(set_of({{1, 0}, {-1, 0}}), set_of({{3, 4}}), Metric::Euclidean) == doctest::Approx(5.0));
  CHECK(metric_from_string(to_string(Metric::Euclidean)) == Metric::Euclidean);
  CHECK_THROWS_AS(metric_from_string("manhattan"), Error);
}

TEST_CASE("centroid distance against an oracle on 1000 random set pairs") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t dim = 2 + rng() % 6;
    const auto a = random_set(rng, 1 + rng() % 8, dim);
    const auto b = random_set(rng, 1 + rng() % 8, dim);
    const auto ma = mean_of(a), mb = mean_of(b);
    const double d = centroid_distance(a, b);
    CHECK(d >= 0.0);
    CHECK(d <= 2.0);
    CHECK(d == doctest::Approx(cosine_oracle(ma, mb)).epsilon(1e-12));
    CHECK(centroid_distance(b, a) == doctest::Approx(d).epsilon(1e-12));
    CHECK(std::abs(centroid_distance(a, a)) < 1e-12);
    CHECK(std::abs(centroid_distance(a, a, Metric::Euclidean)) == 0.0);

    // Translating both sets by the same vector moves each centroid by it and
    // leaves the Euclidean distance unchanged.
    std::vector<double> t(dim);
    std::uniform_real_distribution<double> u(-5, 5);
    for (auto& x : t) x = u(rng);
    auto ta = a, tb = b;
    for (auto& v : ta)
      for (std::size_t k = 0; k < dim; ++k) v.values[k] += t[k];
    for (auto& v : tb)
      for (std::size_t k = 0; k < dim; ++k) v.values[k] += t[k];
    const auto ca = centroid(a), cta = centroid(ta);
    for (std::size_t k = 0; k < dim; ++k) CHECK(std::abs(cta.values[k] - (ca.values[k] + t[k])) < 1e-12);
    CHECK(std::abs(centroid_distance(ta, tb, Metric::Euclidean) - centroid_distance(a, b, Metric::Euclidean)) <
          1e-12);
  }
}
