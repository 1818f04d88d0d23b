#include "charprobe/pipeline/config.hpp"

#include <cstdlib>
#include <set>

#include "charprobe/common/digest.hpp"
#include "charprobe/common/error.hpp"
#include "charprobe/embedkit/embedding.hpp"

#ifndef CHARPROBE_DATA_DIR
#define CHARPROBE_DATA_DIR "data"
#endif

namespace charprobe::pipeline {

namespace {

std::optional<std::string> env(const char* name) {
  const char* v = std::getenv(name);
  if (!v || !*v) return std::nullopt;
  return std::string(v);
}

// Reads one JSON object, tracking which keys were consumed so unknown keys
// can be reported.
class Section {
 public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("must be an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_[key].is_null();
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    if (!has(key)) return fallback;
    try {
      return j_[key].get<T>();
    } catch (const json::exception&) {
      fail("'" + key + "' has the wrong type");
    }
  }

  template <typename T>
  T require(const std::string& key) {
    if (!has(key)) fail("missing '" + key + "'");
    return get<T>(key, T{});
  }

  Section child(const std::string& key) {
    seen_.insert(key);
    static const json empty = json::object();
    return Section(j_.contains(key) ? j_[key] : empty, where_ + "." + key);
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_[key];
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) fail("unknown key '" + k + "'");
    }
  }

  [[noreturn]] void fail(const std::string& msg) const { throw Error(ErrorCode::InvalidConfig, where_ + ": " + msg); }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

}  // namespace

EnvOverrides EnvOverrides::from_environment() {
  return {env("CHARPROBE_GEN_ENDPOINT"), env("CHARPROBE_EMBED_ENDPOINT"), env("CHARPROBE_CLASSIFIER_ENDPOINT"),
          env("CHARPROBE_DATA_DIR")};
}

RunConfig RunConfig::load(const fs::path& path, const EnvOverrides& env) {
  if (!fs::is_regular_file(path)) throw Error(ErrorCode::UnreadablePath, "config not found: " + path.string());
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
  return from_json(j, fs::absolute(path).parent_path(), env);
}

RunConfig RunConfig::from_json(const json& input, const fs::path& base, const EnvOverrides& env) {
  json j = input;
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  if (env.generation && j.contains("generation") && j["generation"].contains("backends") &&
      j["generation"]["backends"].is_array()) {
    for (auto& b : j["generation"]["backends"]) {
      if (b.is_object()) b["endpoint"] = *env.generation;
    }
  }
  if (env.embedding) j["evaluation"]["embedding_endpoint"] = *env.embedding;
  if (env.classifier) j["evaluation"]["classifier_endpoint"] = *env.classifier;

  RunConfig c;
  c.base_dir = base;
  c.canonical = j;
  c.hash = sha256_hex(j.dump());

  Section root(j, "config");
  c.run_id = root.require<std::string>("run_id");
  if (c.run_id.empty() || c.run_id.find_first_of("/\\") != std::string::npos || c.run_id == "." || c.run_id == "..") {
    root.fail("run_id must be a plain non-empty name");
  }
  c.output_root = resolve(base, root.get<std::string>("output_root", "out"));
  if (root.has("data_dir")) {
    c.data_dir = resolve(base, root.get<std::string>("data_dir", ""));
  } else {
    c.data_dir = env.data_dir ? fs::path(*env.data_dir) : fs::path(CHARPROBE_DATA_DIR);
  }
  auto data_file = [&](Section& s, const std::string& key, const std::string& fallback) {
    return s.has(key) ? resolve(base, s.get<std::string>(key, "")) : c.data_dir / fallback;
  };

  {
    auto s = root.child("corpus");
    for (const auto& p : s.get<std::vector<std::string>>("tweets", {})) c.tweet_files.push_back(resolve(base, p));
    if (s.has("articles")) {
      const auto& arr = s.raw("articles");
      if (!arr.is_array()) s.fail("'articles' must be an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        Section a(arr[i], "config.corpus.articles[" + std::to_string(i) + "]");
        c.article_sources.push_back(
            {resolve(base, a.require<std::string>("path")), a.require<std::string>("media_house")});
        a.finish();
      }
    }
    c.dictionary = data_file(s, "dictionary", "english_words.txt");
    c.emoji_map = data_file(s, "emoji_map", "emoji.tsv");
    c.english_threshold = s.get<double>("english_threshold", 0.70);
    if (!(c.english_threshold >= 0.0 && c.english_threshold <= 1.0)) s.fail("english_threshold must be in [0,1]");
    s.finish();
  }

  {
    auto s = root.child("prompts");
    if (s.has("templates")) c.templates = resolve(base, s.get<std::string>("templates", ""));
    if (s.has("entities")) {
      const auto& arr = s.raw("entities");
      if (!arr.is_array()) s.fail("'entities' must be an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        promptkit::Entity e;
        if (arr[i].is_string()) {
          e.name = arr[i].get<std::string>();
        } else {
          Section es(arr[i], "config.prompts.entities[" + std::to_string(i) + "]");
          e.name = es.require<std::string>("name");
          e.source_tag = es.get<std::string>("source_tag", "");
          es.finish();
        }
        if (e.name.empty()) s.fail("entity names must be non-empty");
        c.entities.push_back(e);
      }
    }
    c.prefix_ids = s.get<std::vector<std::string>>("prefixes", {});
    c.tweet_template_ids = s.get<std::vector<std::string>>("tweet_templates", {});
    c.tweet_limit = s.get<std::size_t>("tweet_limit", 0);
    for (const auto& [k, v] : s.get<std::map<std::string, std::string>>("synopses", {})) {
      c.synopses[k] = resolve(base, v);
    }
    s.finish();
  }

  {
    auto s = root.child("generation");
    if (s.has("backends")) {
      const auto& arr = s.raw("backends");
      if (!arr.is_array()) s.fail("'backends' must be an array");
      std::set<std::string> tags;
      for (std::size_t i = 0; i < arr.size(); ++i) {
        Section b(arr[i], "config.generation.backends[" + std::to_string(i) + "]");
        genclient::BackendHandle h;
        h.endpoint = b.require<std::string>("endpoint");
        h.model_tag = b.require<std::string>("model_tag");
        h.reference = b.get<bool>("reference", false);
        h.timeout = std::chrono::milliseconds(b.get<std::int64_t>("timeout_ms", 30000));
        h.max_retries = b.get<int>("max_retries", 3);
        h.backoff_base = std::chrono::milliseconds(b.get<std::int64_t>("backoff_ms", 200));
        b.finish();
        h.validate();
        if (!tags.insert(h.model_tag).second) b.fail("duplicate model_tag '" + h.model_tag + "'");
        if (h.endpoint.rfind("mock:", 0) == 0) c.mock_scripts[h.model_tag] = resolve(base, h.endpoint.substr(5));
        c.backends.push_back(h);
      }
    }
    c.n_target = s.get<std::size_t>("n_target", 10);
    c.max_attempts = s.get<std::size_t>("max_attempts", 100);
    if (c.n_target < 1) s.fail("n_target must be >= 1");
    if (c.max_attempts < c.n_target) s.fail("max_attempts must be >= n_target");
    c.decoding.max_new_tokens = s.get<int>("max_new_tokens", 40);
    c.decoding.temperature = s.get<double>("temperature", 0.9);
    c.decoding.top_p = s.get<double>("top_p", 0.95);
    if (s.has("seed")) c.decoding.seed = s.get<std::int64_t>("seed", 0);
    try {
      c.decoding.validate();
    } catch (const Error& e) {
      s.fail(e.what());
    }
    c.parallelism = s.get<std::size_t>("parallelism", 1);
    if (c.parallelism < 1) s.fail("parallelism must be >= 1");
    auto v = s.child("validity");
    c.validity.min_word_tokens = v.get<std::size_t>("min_word_tokens", 3);
    c.validity.min_english_ratio = v.get<double>("min_english_ratio", 0.70);
    c.validity.token_floor = v.get<std::size_t>("token_floor", 8);
    if (!(c.validity.min_english_ratio >= 0.0 && c.validity.min_english_ratio <= 1.0)) {
      v.fail("min_english_ratio must be in [0,1]");
    }
    v.finish();
    s.finish();
  }

  {
    auto s = root.child("evaluation");
    c.sentiment_lexicon = data_file(s, "sentiment_lexicon", "sentiment_lexicon.txt");
    c.adjective_lexicon = data_file(s, "adjective_lexicon", "adjective_lexicon.txt");
    c.tie_positive = s.get<bool>("tie_positive", true);
    if (s.has("classifier_endpoint")) c.classifier_endpoint = s.get<std::string>("classifier_endpoint", "");
    if (s.has("embedding_endpoint")) c.embedding_endpoint = s.get<std::string>("embedding_endpoint", "");
    c.distance_metric = s.get<std::string>("distance_metric", "cosine");
    try {
      embedkit::metric_from_string(c.distance_metric);
    } catch (const Error&) {
      s.fail("distance_metric must be cosine or euclidean");
    }
    c.embedding_cache = s.get<bool>("embedding_cache", true);
    c.normalize_embeddings = s.get<bool>("normalize_embeddings", false);
    c.k_min = s.get<std::size_t>("k_min", 2);
    c.k_max = s.get<std::size_t>("k_max", 10);
    if (c.k_min < 2 || c.k_max < c.k_min) s.fail("k range must satisfy 2 <= k_min <= k_max");
    c.restarts = s.get<int>("restarts", 25);
    if (c.restarts < 1) s.fail("restarts must be >= 1");
    c.cluster_seed = s.get<std::uint64_t>("cluster_seed", 0);
    c.entity_source_decimals = s.get<int>("entity_source_decimals", 1);
    if (c.entity_source_decimals != 1 && c.entity_source_decimals != 2) s.fail("entity_source_decimals must be 1 or 2");
    s.finish();
  }

  {
    auto s = root.child("annotation");
    c.min_annotators = s.get<std::size_t>("min_annotators", 1);
    if (c.min_annotators < 1) s.fail("min_annotators must be >= 1");
    for (const auto& p : s.get<std::vector<std::vector<std::string>>>("agreement_pairs", {})) {
      if (p.size() != 2) s.fail("agreement_pairs entries must be [a, b]");
      c.agreement_pairs.emplace_back(p[0], p[1]);
    }
    c.host = s.get<std::string>("host", "127.0.0.1");
    c.port = s.get<int>("port", 8765);
    if (c.port < 0 || c.port > 65535) s.fail("port out of range");
    if (s.has("static_dir")) c.static_dir = resolve(base, s.get<std::string>("static_dir", ""));
    s.finish();
  }
  root.finish();

  // Referenced ids must exist in the catalog.
  const auto cat = c.catalog();
  if (c.prefix_ids.empty()) {
    for (const auto& p : cat.prefixes()) c.prefix_ids.push_back(p.id);
  }
  try {
    for (const auto& id : c.prefix_ids) cat.prefix(id);
    for (const auto& id : c.tweet_template_ids) {
      const auto& t = cat.tweet_template(id);
      if (t.family == promptkit::TemplateFamily::RecordRc && !c.synopses.count(t.question_id())) {
        throw Error(ErrorCode::InvalidConfig, "template '" + id + "' needs a synopsis for '" + t.question_id() + "'");
      }
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
  return c;
}

promptkit::TemplateCatalog RunConfig::catalog() const {
  return templates ? promptkit::TemplateCatalog::load(*templates) : promptkit::TemplateCatalog::bundled();
}

}  // namespace charprobe::pipeline
