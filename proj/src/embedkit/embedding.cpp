#include "charprobe/embedkit/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "charprobe/common/digest.hpp"
#include "charprobe/common/error.hpp"
#include "charprobe/common/files.hpp"
#include "charprobe/common/http_json.hpp"
#include "charprobe/common/text.hpp"

namespace charprobe::embedkit {

HashEmbedder::HashEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "embedding dim must be positive");
}

std::string HashEmbedder::tag() const {
  return "hash-embedder/d" + std::to_string(dim_) + "/s" + std::to_string(seed_);
}

std::vector<EmbeddingVector> HashEmbedder::embed(const std::vector<std::string>& texts) const {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    auto tokens = text::split_whitespace(text::to_lower(t));
    if (tokens.empty()) tokens.push_back(t);
    std::vector<double> v(dim_, 0.0);
    for (const auto& tok : tokens) {
      std::uint64_t state = fnv1a64(tok) ^ seed_;
      for (auto& x : v) {
        // top 53 bits -> [0,1) -> [-1,1)
        x += static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 * 2.0 - 1.0;
      }
    }
    double norm = 0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0) {
      for (auto& x : v) x /= norm;
    }
    out.push_back({std::move(v), tag()});
  }
  return out;
}

HttpEmbedder::HttpEmbedder(std::string endpoint, std::chrono::milliseconds timeout, std::size_t batch_size)
    : endpoint_(std::move(endpoint)), timeout_(timeout), batch_size_(batch_size == 0 ? 1 : batch_size) {}

std::vector<EmbeddingVector> HttpEmbedder::embed(const std::vector<std::string>& texts) const {
  const auto ep = net::parse_endpoint(endpoint_);
  std::vector<EmbeddingVector> out;
  for (std::size_t start = 0; start < texts.size(); start += batch_size_) {
    const auto end = std::min(texts.size(), start + batch_size_);
    std::vector<std::string> batch(texts.begin() + static_cast<std::ptrdiff_t>(start),
                                   texts.begin() + static_cast<std::ptrdiff_t>(end));
    const auto reply = net::call_json(ep, "/embed", {{"texts", batch}}, timeout_);
    if (!reply.is_object() || !reply.contains("vectors") || !reply["vectors"].is_array() ||
        reply["vectors"].size() != batch.size()) {
      throw Error(ErrorCode::MalformedResponse, "/embed reply must carry one vector per text");
    }
    for (const auto& row : reply["vectors"]) {
      if (!row.is_array()) throw Error(ErrorCode::MalformedResponse, "/embed vector is not an array");
      EmbeddingVector v;
      v.source = tag();
      for (const auto& x : row) {
        if (!x.is_number()) throw Error(ErrorCode::MalformedResponse, "/embed vector has a non-number");
        v.values.push_back(x.get<double>());
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

VectorCache::VectorCache(std::filesystem::path path) : path_(std::move(path)) {
  if (!fs::exists(path_)) return;
  auto lines = read_jsonl(path_);
  for (const auto& rec : lines.records) {
    const auto& j = rec.value;
    if (!j.is_object() || !j.contains("key") || !j.contains("vector")) continue;
    entries_[j["key"].get<std::string>()] = j["vector"].get<std::vector<double>>();
  }
}

std::string VectorCache::key(const std::string& tag, std::string_view text) {
  std::string buf = tag;
  buf.push_back('\0');
  buf.append(text);
  return sha256_hex(buf);
}

std::optional<std::vector<double>> VectorCache::get(const std::string& tag, std::string_view text) const {
  std::lock_guard lock(mu_);
  auto it = entries_.find(key(tag, text));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void VectorCache::put(const std::string& tag, std::string_view text, const std::vector<double>& values) {
  const auto k = key(tag, text);
  std::lock_guard lock(mu_);
  if (entries_.count(k)) return;
  entries_[k] = values;
  if (path_.has_parent_path()) fs::create_directories(path_.parent_path());
  std::ofstream f(path_, std::ios::app | std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot append to " + path_.string());
  f << json{{"key", k}, {"tag", tag}, {"vector", values}}.dump() << '\n';
}

std::size_t VectorCache::size() const {
  std::lock_guard lock(mu_);
  return entries_.size();
}

std::vector<EmbeddingVector> embed(const EmbeddingBackend& backend, const std::vector<std::string>& texts,
                                   VectorCache* cache) {
  if (texts.empty()) throw Error(ErrorCode::EmptySet, "nothing to embed");
  const auto tag = backend.tag();
  std::vector<EmbeddingVector> out(texts.size());
  std::vector<std::string> missing;
  std::vector<std::size_t> missing_at;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (cache) {
      if (auto hit = cache->get(tag, texts[i])) {
        out[i] = {std::move(*hit), tag};
        continue;
      }
    }
    missing.push_back(texts[i]);
    missing_at.push_back(i);
  }
  if (!missing.empty()) {
    auto fresh = backend.embed(missing);
    if (fresh.size() != missing.size()) {
      throw Error(ErrorCode::MalformedResponse, "backend returned " + std::to_string(fresh.size()) +
                                                    " vectors for " + std::to_string(missing.size()) + " texts");
    }
    for (std::size_t j = 0; j < fresh.size(); ++j) {
      if (cache) cache->put(tag, missing[j], fresh[j].values);
      out[missing_at[j]] = std::move(fresh[j]);
    }
  }
  const auto dim = out.front().dim();
  for (const auto& v : out) {
    if (v.dim() != dim || dim == 0) {
      throw Error(ErrorCode::DimensionMismatch,
                  "expected dim " + std::to_string(dim) + ", got " + std::to_string(v.dim()));
    }
    for (double x : v.values) {
      if (!std::isfinite(x)) throw Error(ErrorCode::MalformedResponse, "non-finite embedding component");
    }
  }
  return out;
}

std::string_view to_string(Metric m) { return m == Metric::Cosine ? "cosine" : "euclidean"; }

Metric metric_from_string(std::string_view s) {
  if (s == "cosine") return Metric::Cosine;
  if (s == "euclidean") return Metric::Euclidean;
  throw Error(ErrorCode::InvalidConfig, "unknown metric '" + std::string(s) + "'");
}

EmbeddingVector centroid(const std::vector<EmbeddingVector>& vectors) {
  if (vectors.empty()) throw Error(ErrorCode::EmptySet, "centroid of an empty set");
  EmbeddingVector c;
  c.source = vectors.front().source;
  c.values.assign(vectors.front().dim(), 0.0);
  for (const auto& v : vectors) {
    if (v.dim() != c.dim()) throw Error(ErrorCode::DimensionMismatch, "centroid over mixed dims");
    for (std::size_t i = 0; i < v.dim(); ++i) c.values[i] += v.values[i];
  }
  for (auto& x : c.values) x /= static_cast<double>(vectors.size());
  return c;
}

double centroid_distance(const std::vector<EmbeddingVector>& a, const std::vector<EmbeddingVector>& b,
                         Metric metric) {
  const auto ca = centroid(a);
  const auto cb = centroid(b);
  if (ca.dim() != cb.dim()) throw Error(ErrorCode::DimensionMismatch, "centroids differ in dim");
  if (metric == Metric::Euclidean) {
    double s = 0;
    for (std::size_t i = 0; i < ca.dim(); ++i) s += (ca.values[i] - cb.values[i]) * (ca.values[i] - cb.values[i]);
    return std::sqrt(s);
  }
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < ca.dim(); ++i) {
    dot += ca.values[i] * cb.values[i];
    na += ca.values[i] * ca.values[i];
    nb += cb.values[i] * cb.values[i];
  }
  if (na == 0 || nb == 0) throw Error(ErrorCode::ZeroCentroid, "cosine distance to a zero centroid");
  const double cosv = std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
  return std::max(0.0, 1.0 - cosv);
}

}  // namespace charprobe::embedkit
