#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "charprobe/common/files.hpp"
#include "charprobe/genclient/backend.hpp"
#include "charprobe/genclient/validity.hpp"
#include "charprobe/promptkit/catalog.hpp"

namespace charprobe::pipeline {

struct ArticleSource {
  fs::path path;
  std::string media_house;
};

// Backend endpoint overrides read from the environment.
struct EnvOverrides {
  std::optional<std::string> generation;  // CHARPROBE_GEN_ENDPOINT
  std::optional<std::string> embedding;   // CHARPROBE_EMBED_ENDPOINT
  std::optional<std::string> classifier;  // CHARPROBE_CLASSIFIER_ENDPOINT
  std::optional<std::string> data_dir;    // CHARPROBE_DATA_DIR
  static EnvOverrides from_environment();
};

// A run configuration file (JSON). Relative paths resolve against the
// directory holding the file. Unknown keys are rejected.
struct RunConfig {
  fs::path base_dir;
  std::string run_id;
  fs::path output_root;
  fs::path data_dir;

  // corpus
  std::vector<fs::path> tweet_files;
  std::vector<ArticleSource> article_sources;
  fs::path dictionary;
  fs::path emoji_map;
  double english_threshold = 0.70;

  // prompts
  std::optional<fs::path> templates;  // catalog file; bundled catalog when unset
  std::vector<promptkit::Entity> entities;
  std::vector<std::string> prefix_ids;          // all bundled prefixes when unset
  std::vector<std::string> tweet_template_ids;  // none when unset
  std::size_t tweet_limit = 0;                  // 0 = every cleaned tweet
  std::map<std::string, fs::path> synopses;     // record_rc concept -> synopsis file

  // generation
  std::vector<genclient::BackendHandle> backends;
  std::map<std::string, fs::path> mock_scripts;  // model_tag -> resolved script for "mock:" endpoints
  std::size_t n_target = 10;
  std::size_t max_attempts = 100;
  genclient::GenerationRequest decoding;
  std::size_t parallelism = 1;
  genclient::ValidityRules validity;

  // evaluation
  fs::path sentiment_lexicon;
  fs::path adjective_lexicon;
  bool tie_positive = true;
  std::optional<std::string> classifier_endpoint;
  std::optional<std::string> embedding_endpoint;  // "hash[:dim[:seed]]" or an http endpoint
  std::string distance_metric = "cosine";
  bool embedding_cache = true;
  bool normalize_embeddings = false;
  std::size_t k_min = 2;
  std::size_t k_max = 10;
  int restarts = 25;
  std::uint64_t cluster_seed = 0;
  int entity_source_decimals = 1;

  // annotation
  std::size_t min_annotators = 1;
  std::vector<std::pair<std::string, std::string>> agreement_pairs;  // all overlapping pairs when empty
  std::string host = "127.0.0.1";
  int port = 8765;
  std::optional<fs::path> static_dir;

  json canonical;  // the parsed file with env overrides applied
  std::string hash;

  static RunConfig load(const fs::path& path, const EnvOverrides& env = EnvOverrides::from_environment());
  static RunConfig from_json(const json& j, const fs::path& base_dir, const EnvOverrides& env = {});

  promptkit::TemplateCatalog catalog() const;
  fs::path run_dir() const { return output_root / run_id; }
  fs::path clean_dir() const { return run_dir() / "clean"; }
  fs::path store_path() const { return run_dir() / "store" / "entailments.jsonl"; }
  fs::path manifest_path() const { return run_dir() / "store" / "manifest.json"; }
  fs::path metrics_path() const { return run_dir() / "eval" / "metrics.jsonl"; }
  fs::path evaluation_path() const { return run_dir() / "eval" / "evaluation.json"; }
  fs::path annotation_log() const { return run_dir() / "annotations" / "log.jsonl"; }
  fs::path report_dir() const { return output_root / "reports" / run_id; }
  fs::path vector_cache() const { return output_root / "cache" / "vectors.jsonl"; }
};

}  // namespace charprobe::pipeline
