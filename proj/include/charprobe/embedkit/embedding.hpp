#pragma once

#include <chrono>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace charprobe::embedkit {

struct EmbeddingVector {
  std::vector<double> values;
  std::string source;  // backend tag
  std::size_t dim() const { return values.size(); }
};

class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) const = 0;
  virtual std::string tag() const = 0;
};

// Deterministic test embedder: each lowercased whitespace token is hashed
// into a seeded pseudo-random direction; the text vector is the unit-length
// sum. Shared words give nearby vectors.
class HashEmbedder : public EmbeddingBackend {
 public:
  explicit HashEmbedder(std::size_t dim = 16, std::uint64_t seed = 0);
  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) const override;
  std::string tag() const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

// POST {endpoint}/embed {"texts": [...]} -> {"vectors": [[...], ...]}
class HttpEmbedder : public EmbeddingBackend {
 public:
  explicit HttpEmbedder(std::string endpoint, std::chrono::milliseconds timeout = std::chrono::seconds(60),
                        std::size_t batch_size = 64);
  std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts) const override;
  std::string tag() const override { return "http:" + endpoint_; }

 private:
  std::string endpoint_;
  std::chrono::milliseconds timeout_;
  std::size_t batch_size_;
};

// Content-addressed vectors, one jsonl line per entry keyed by
// sha256(tag + '\0' + text). Entries are appended as they are added.
class VectorCache {
 public:
  explicit VectorCache(std::filesystem::path path);
  std::optional<std::vector<double>> get(const std::string& tag, std::string_view text) const;
  void put(const std::string& tag, std::string_view text, const std::vector<double>& values);
  std::size_t size() const;

  static std::string key(const std::string& tag, std::string_view text);

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::vector<double>> entries_;
};

// Checks the embedding contract: texts non-empty, one finite vector per
// text, uniform dim (DimensionMismatch otherwise). Uses the cache if given.
std::vector<EmbeddingVector> embed(const EmbeddingBackend& backend, const std::vector<std::string>& texts,
                                   VectorCache* cache = nullptr);

enum class Metric { Cosine, Euclidean };
std::string_view to_string(Metric m);
Metric metric_from_string(std::string_view s);

EmbeddingVector centroid(const std::vector<EmbeddingVector>& vectors);

// Cosine: 1 - cos(cA, cB), in [0, 2]; a zero centroid throws ZeroCentroid.
// Euclidean: ||cA - cB||.
double centroid_distance(const std::vector<EmbeddingVector>& a, const std::vector<EmbeddingVector>& b,
                         Metric metric = Metric::Cosine);

}  // namespace charprobe::embedkit
