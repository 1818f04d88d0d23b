#include "charprobe/pipeline/commands.hpp"

#include <ostream>
#include <set>

#include "charprobe/annotation/agreement.hpp"
#include "charprobe/clusterlab/kmeans.hpp"
#include "charprobe/common/decimal.hpp"
#include "charprobe/common/digest.hpp"
#include "charprobe/common/error.hpp"
#include "charprobe/common/text.hpp"
#include "charprobe/corpus/clean.hpp"
#include "charprobe/corpus/ingest.hpp"
#include "charprobe/genclient/scripted.hpp"
#include "charprobe/nlpmetrics/tables.hpp"
#include "charprobe/promptkit/render.hpp"

namespace charprobe::pipeline {

namespace {

using genclient::Entailment;

std::string short_hash(const fs::path& p) { return file_sha256(p).substr(0, 12); }

void require_file(const fs::path& p, const std::string& what) {
  if (!fs::is_regular_file(p)) throw Error(ErrorCode::UnreadablePath, what + " not found: " + p.string());
}

std::vector<corpus::CleanTweet> read_clean_tweets(const fs::path& path) {
  require_file(path, "cleaned tweets (run `clean` first)");
  auto lines = read_jsonl(path);
  if (!lines.errors.empty()) throw Error(ErrorCode::MalformedRecord, lines.errors.front());
  std::vector<corpus::CleanTweet> out;
  for (const auto& l : lines.records) {
    corpus::CleanTweet t;
    t.id = l.value.value("id", "");
    t.text = l.value.value("text", "");
    t.english_ratio = l.value.value("english_ratio", 0.0);
    out.push_back(std::move(t));
  }
  return out;
}

bool is_reference(const genclient::RunManifest& m, const std::string& model_tag) {
  for (const auto& b : m.backends) {
    if (b.model_tag == model_tag) return b.reference;
  }
  return false;
}

genclient::RunManifest load_manifest(const RunConfig& cfg) {
  require_file(cfg.manifest_path(), "run manifest (run `generate` first)");
  try {
    return genclient::RunManifest::from_json(json::parse(read_file(cfg.manifest_path())));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, cfg.manifest_path().string() + ": " + e.what());
  }
}

std::string prefix_label(const promptkit::TemplateCatalog& cat, const std::string& prefix_id) {
  return cat.prefix(prefix_id).text;
}

// Labels for the configured prefixes, in configured order.
std::vector<std::string> prefix_labels(const RunConfig& cfg, const promptkit::TemplateCatalog& cat) {
  std::vector<std::string> out;
  for (const auto& id : cfg.prefix_ids) out.push_back(prefix_label(cat, id));
  return out;
}

struct MetricRecord {
  std::string id;
  std::string model_tag;
  bool reference = false;
  std::string prefix;  // label
  std::string entity;
  nlpmetrics::SentimentLabel sentiment;
  nlpmetrics::AdjectiveSet adjectives;
  std::optional<std::size_t> cluster;

  json to_json() const {
    json adj = json::array();
    for (const auto& a : adjectives.items) adj.push_back({{"token", a.token}, {"tag", std::string(to_string(a.tag))}});
    return {{"id", id},
            {"model_tag", model_tag},
            {"reference", reference},
            {"prefix", prefix},
            {"entity", entity},
            {"sentiment", std::string(to_string(sentiment.value))},
            {"sentiment_score", sentiment.score},
            {"adjectives", adj},
            {"cluster", cluster ? json(*cluster) : json(nullptr)}};
  }

  static MetricRecord from_json(const json& j) {
    MetricRecord m;
    m.id = j.at("id").get<std::string>();
    m.model_tag = j.at("model_tag").get<std::string>();
    m.reference = j.at("reference").get<bool>();
    m.prefix = j.at("prefix").get<std::string>();
    m.entity = j.at("entity").get<std::string>();
    m.sentiment.value = nlpmetrics::polarity_from_string(j.at("sentiment").get<std::string>());
    m.sentiment.score = j.at("sentiment_score").get<double>();
    for (const auto& a : j.at("adjectives")) {
      const auto tag = a.at("tag").get<std::string>();
      nlpmetrics::AdjTag t = tag == "JJS" ? nlpmetrics::AdjTag::JJS
                             : tag == "JJR" ? nlpmetrics::AdjTag::JJR
                                            : nlpmetrics::AdjTag::JJ;
      m.adjectives.items.push_back({a.at("token").get<std::string>(), t});
    }
    if (!j.at("cluster").is_null()) m.cluster = j.at("cluster").get<std::size_t>();
    return m;
  }
};

std::vector<MetricRecord> load_metrics(const RunConfig& cfg) {
  auto lines = read_jsonl(cfg.metrics_path());
  if (!lines.errors.empty()) throw Error(ErrorCode::MalformedRecord, lines.errors.front());
  std::vector<MetricRecord> out;
  try {
    for (const auto& l : lines.records) out.push_back(MetricRecord::from_json(l.value));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedRecord, cfg.metrics_path().string() + ": " + e.what());
  }
  return out;
}

std::string sentiment_provenance(const RunConfig& cfg) {
  if (cfg.classifier_endpoint) return "remote classifier " + *cfg.classifier_endpoint;
  return "lexicon sentiment " + cfg.sentiment_lexicon.filename().string() + " sha256:" +
         short_hash(cfg.sentiment_lexicon) + (cfg.tie_positive ? ", ties positive" : ", ties negative");
}

std::string adjective_provenance(const RunConfig& cfg) {
  return "lexicon adjective tagger " + cfg.adjective_lexicon.filename().string() + " sha256:" +
         short_hash(cfg.adjective_lexicon);
}

template <typename T>
nlpmetrics::Groups<T> group_by_prefix(const std::vector<MetricRecord>& metrics, const std::vector<std::string>& order,
                                      T MetricRecord::*member) {
  nlpmetrics::Groups<T> groups;
  for (const auto& p : order) {
    std::vector<T> items;
    for (const auto& m : metrics) {
      if (!m.reference && m.prefix == p) items.push_back(m.*member);
    }
    if (!items.empty()) groups.emplace_back(p, std::move(items));
  }
  return groups;
}

}  // namespace

CleanSummary cmd_clean(const RunConfig& cfg, std::ostream& log) {
  if (cfg.tweet_files.empty() && cfg.article_sources.empty()) {
    throw Error(ErrorCode::InvalidConfig, "no tweet files or article sources configured");
  }
  for (const auto& p : cfg.tweet_files) require_file(p, "tweet file");
  for (const auto& a : cfg.article_sources) {
    if (!fs::exists(a.path)) throw Error(ErrorCode::UnreadablePath, "article path not found: " + a.path.string());
  }
  require_file(cfg.dictionary, "dictionary");
  require_file(cfg.emoji_map, "emoji map");

  const auto dict = corpus::Dictionary::load(cfg.dictionary);
  const auto emoji = corpus::EmojiMap::load(cfg.emoji_map);
  const corpus::PunctuationSet punct;

  CleanSummary s;
  std::vector<corpus::RawTweet> raws;
  std::set<std::string> ids;
  for (const auto& p : cfg.tweet_files) {
    auto r = corpus::read_tweets(p);
    s.tweets_skipped += r.skipped;
    for (const auto& d : r.diagnostics) log << "skip " << d << "\n";
    for (auto& t : r.items) {
      if (!ids.insert(t.id).second) {
        ++s.tweets_skipped;
        log << "skip " << p.string() << ": duplicate id " << t.id << "\n";
        continue;
      }
      raws.push_back(std::move(t));
    }
  }
  s.tweets_read = raws.size();
  const auto filtered = corpus::filter_tweets(raws, {emoji, punct, dict}, cfg.english_threshold);
  s.kept = filtered.kept.size();
  s.rejected_empty = filtered.rejected.empty;
  s.rejected_ratio = filtered.rejected.ratio;

  std::vector<corpus::ArticleDoc> articles;
  for (const auto& a : cfg.article_sources) {
    auto r = corpus::ingest_articles(a.path, a.media_house);
    s.articles_skipped += r.skipped;
    for (const auto& d : r.diagnostics) log << "skip " << d << "\n";
    for (auto& d : r.items) articles.push_back(std::move(d));
  }
  s.articles = articles.size();
  if (s.kept == 0 && s.articles == 0) throw Error(ErrorCode::EmptySet, "cleaning produced no tweets and no articles");

  write_file(cfg.clean_dir() / "tweets.jsonl", corpus::clean_corpus_jsonl(filtered.kept));
  write_file(cfg.clean_dir() / "articles.jsonl", corpus::articles_jsonl(articles));
  const json tally{{"tweets_read", s.tweets_read},       {"tweets_skipped", s.tweets_skipped},
                   {"kept", s.kept},                     {"rejected_empty", s.rejected_empty},
                   {"rejected_ratio", s.rejected_ratio}, {"english_threshold", cfg.english_threshold},
                   {"articles", s.articles},             {"articles_skipped", s.articles_skipped}};
  write_file(cfg.clean_dir() / "tally.json", tally.dump(2) + "\n");
  log << "tweets: " << s.tweets_read << " read, " << s.kept << " kept, " << s.rejected_ratio
      << " below the English ratio, " << s.rejected_empty << " empty\n";
  log << "articles: " << s.articles << " ingested, " << s.articles_skipped << " skipped\n";
  return s;
}

std::vector<promptkit::PromptInstance> build_prompts(const RunConfig& cfg) {
  const auto cat = cfg.catalog();
  std::vector<promptkit::PromptInstance> prompts;
  for (const auto& e : cfg.entities) {
    for (const auto& id : cfg.prefix_ids) prompts.push_back(promptkit::render_entity_prompt(e, cat.prefix(id)));
  }
  if (!cfg.tweet_template_ids.empty()) {
    auto tweets = read_clean_tweets(cfg.clean_dir() / "tweets.jsonl");
    if (cfg.tweet_limit > 0 && tweets.size() > cfg.tweet_limit) tweets.resize(cfg.tweet_limit);
    std::map<std::string, std::string> synopsis_text;
    for (const auto& [concept_id, path] : cfg.synopses) {
      require_file(path, "synopsis for " + concept_id);
      synopsis_text[concept_id] = text::trim(read_file(path));
    }
    for (const auto& t : tweets) {
      for (const auto& id : cfg.tweet_template_ids) {
        const auto& tmpl = cat.tweet_template(id);
        std::string synopsis;
        if (tmpl.family == promptkit::TemplateFamily::RecordRc) synopsis = synopsis_text.at(tmpl.question_id());
        prompts.push_back(promptkit::render_tweet_template(tmpl, t.text, synopsis));
      }
    }
  }
  return prompts;
}

std::vector<genclient::ModelBackend> make_backends(const RunConfig& cfg) {
  std::vector<genclient::ModelBackend> out;
  for (const auto& h : cfg.backends) {
    auto it = cfg.mock_scripts.find(h.model_tag);
    std::shared_ptr<genclient::GenerationBackend> backend;
    if (it != cfg.mock_scripts.end()) {
      require_file(it->second, "mock script for " + h.model_tag);
      backend = std::make_shared<genclient::ScriptedBackend>(genclient::MockScript::load(it->second));
    } else {
      backend = genclient::make_backend(h);
    }
    out.push_back({h, std::move(backend)});
  }
  return out;
}

genclient::RunManifest cmd_generate(const RunConfig& cfg, std::ostream& log) {
  if (cfg.backends.empty()) throw Error(ErrorCode::InvalidConfig, "no generation backends configured");
  require_file(cfg.dictionary, "dictionary");
  const auto prompts = build_prompts(cfg);
  if (prompts.empty()) throw Error(ErrorCode::EmptyPromptList, "no entities or tweet templates configured");
  const auto backends = make_backends(cfg);
  const auto dict = corpus::Dictionary::load(cfg.dictionary);

  genclient::ExperimentOptions opts;
  opts.collect.n_target = cfg.n_target;
  opts.collect.max_attempts = cfg.max_attempts;
  opts.collect.defaults = cfg.decoding;
  opts.collect.rules = cfg.validity;
  opts.parallelism = cfg.parallelism;
  opts.run_id = cfg.run_id;
  opts.template_catalog_hash = cfg.catalog().hash();
  opts.config_hash = cfg.hash;

  fs::create_directories(cfg.store_path().parent_path());
  fs::remove(cfg.store_path());
  genclient::EntailmentStore store(cfg.store_path());
  auto result = genclient::run_experiment(backends, prompts, dict, opts, &store);
  write_file(cfg.manifest_path(), result.manifest.to_json().dump(2) + "\n");

  for (const auto& o : result.manifest.outcomes) {
    log << o.model_tag << "  " << o.prompt_key << "  fail_count=" << o.fail_count << " valid=" << o.valid
        << " attempts=" << o.attempts << "  " << to_string(o.status);
    if (!o.error.empty()) log << "  (" << o.error << ")";
    log << "\n";
  }
  log << result.entailments.size() << " entailments written to " << cfg.store_path().string() << "\n";
  if (result.manifest.failed_count() == result.manifest.outcomes.size()) {
    throw Error(ErrorCode::BackendUnreachable, "every prompt failed; see the manifest for per-prompt errors");
  }
  return result.manifest;
}

std::unique_ptr<embedkit::EmbeddingBackend> make_embedder(const std::string& endpoint) {
  if (endpoint == "hash" || endpoint.rfind("hash:", 0) == 0) {
    std::size_t dim = 16;
    std::uint64_t seed = 0;
    if (endpoint.size() > 5) {
      const auto rest = endpoint.substr(5);
      const auto colon = rest.find(':');
      try {
        dim = std::stoul(rest.substr(0, colon));
        if (colon != std::string::npos) seed = std::stoull(rest.substr(colon + 1));
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidConfig, "bad hash embedder spec '" + endpoint + "'");
      }
    }
    return std::make_unique<embedkit::HashEmbedder>(dim, seed);
  }
  return std::make_unique<embedkit::HttpEmbedder>(endpoint);
}

EvaluateSummary cmd_evaluate(const RunConfig& cfg, std::ostream& log) {
  require_file(cfg.store_path(), "entailment store (run `generate` first)");
  require_file(cfg.sentiment_lexicon, "sentiment lexicon");
  require_file(cfg.adjective_lexicon, "adjective lexicon");
  const auto manifest = load_manifest(cfg);
  const auto cat = cfg.catalog();
  const auto entailments = genclient::EntailmentStore::load(cfg.store_path());

  EvaluateSummary summary;
  std::vector<const Entailment*> scored;
  for (const auto& e : entailments) {
    if (e.valid && e.kind == promptkit::PromptKind::EntityPrefix) scored.push_back(&e);
  }
  summary.scored = scored.size();

  std::vector<std::string> texts;
  for (const auto* e : scored) texts.push_back(e->text);

  std::vector<nlpmetrics::SentimentLabel> labels;
  if (cfg.classifier_endpoint) {
    labels = nlpmetrics::RemoteSentiment(*cfg.classifier_endpoint).classify(texts);
  } else {
    labels = nlpmetrics::LexiconSentiment::load(cfg.sentiment_lexicon, cfg.tie_positive).classify(texts);
  }
  const auto tagger = nlpmetrics::LexiconAdjectiveTagger::load(cfg.adjective_lexicon);

  std::vector<MetricRecord> metrics;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    const auto* e = scored[i];
    MetricRecord m;
    m.id = e->id;
    m.model_tag = e->model_tag;
    m.reference = is_reference(manifest, e->model_tag);
    m.prefix = prefix_label(cat, e->prefix_id);
    m.entity = e->entity;
    m.sentiment = labels[i];
    m.adjectives = nlpmetrics::adjectives(e->text, tagger);
    metrics.push_back(std::move(m));
  }

  json evaluation{{"run_id", cfg.run_id},
                  {"sentiment", sentiment_provenance(cfg)},
                  {"adjectives", adjective_provenance(cfg)},
                  {"distance_metric", cfg.distance_metric},
                  {"embedding", nullptr},
                  {"adjective_distance", json::object()},
                  {"sentence_distance", json::object()},
                  {"k_selection", nullptr}};
  auto note = [&](const std::string& n) {
    summary.notes.push_back(n);
    log << "note: " << n << "\n";
  };

  if (!cfg.embedding_endpoint) {
    note("no embedding endpoint configured; centroid distances and clustering skipped");
  } else if (metrics.empty()) {
    note("no valid entity outputs; embedding steps skipped");
  } else {
    try {
      const auto embedder = make_embedder(*cfg.embedding_endpoint);
      std::optional<embedkit::VectorCache> cache;
      if (cfg.embedding_cache) cache.emplace(cfg.vector_cache());
      auto embed = [&](const std::vector<std::string>& t) {
        return embedkit::embed(*embedder, t, cache ? &*cache : nullptr);
      };
      const auto vectors = embed(texts);
      const auto metric = embedkit::metric_from_string(cfg.distance_metric);
      summary.embeddings = true;
      evaluation["embedding"] = {{"tag", embedder->tag()}, {"dim", vectors.front().dim()},
                                 {"normalize", cfg.normalize_embeddings}};

      // Centroid distances between adapted and reference outputs, per prefix.
      const bool has_reference =
          std::any_of(metrics.begin(), metrics.end(), [](const MetricRecord& m) { return m.reference; });
      if (!has_reference) note("no reference backend outputs; centroid distances skipped");
      for (const auto& label : has_reference ? prefix_labels(cfg, cat) : std::vector<std::string>{}) {
        std::vector<embedkit::EmbeddingVector> adapted, reference;
        std::vector<std::string> adapted_adj, reference_adj;
        for (std::size_t i = 0; i < metrics.size(); ++i) {
          if (metrics[i].prefix != label) continue;
          (metrics[i].reference ? reference : adapted).push_back(vectors[i]);
          for (const auto& a : metrics[i].adjectives.items) {
            (metrics[i].reference ? reference_adj : adapted_adj).push_back(a.token);
          }
        }
        try {
          if (!adapted.empty() && !reference.empty()) {
            evaluation["sentence_distance"][label] = embedkit::centroid_distance(adapted, reference, metric);
          }
          if (!adapted_adj.empty() && !reference_adj.empty()) {
            evaluation["adjective_distance"][label] =
                embedkit::centroid_distance(embed(adapted_adj), embed(reference_adj), metric);
          }
        } catch (const Error& e) {
          if (e.code() != ErrorCode::ZeroCentroid) throw;
          note("'" + label + "': " + e.what());
        }
      }

      std::vector<std::size_t> rows;
      for (std::size_t i = 0; i < metrics.size(); ++i) {
        if (!metrics[i].reference) rows.push_back(i);
      }
      const std::size_t k_max = rows.size() >= 3 ? std::min(cfg.k_max, rows.size() - 1) : 0;
      if (rows.size() < 3 || k_max < cfg.k_min) {
        note("clustering skipped: TooFewPoints (" + std::to_string(rows.size()) + " adapted outputs)");
      } else {
        clusterlab::Matrix x(rows.size(), vectors.front().dim());
        for (std::size_t r = 0; r < rows.size(); ++r) {
          std::copy(vectors[rows[r]].values.begin(), vectors[rows[r]].values.end(), x.row(r).begin());
        }
        if (cfg.normalize_embeddings) x = clusterlab::normalize_rows(x);
        const auto sel = clusterlab::select_k(x, cfg.k_min, k_max, cfg.cluster_seed,
                                              {.max_iter = 300, .tol = 1e-6, .restarts = cfg.restarts});
        const auto& chosen = sel.chosen();
        for (std::size_t r = 0; r < rows.size(); ++r) metrics[rows[r]].cluster = chosen.assignments[r];
        summary.chosen_k = sel.chosen_k;
        json curve = json::array();
        for (const auto& s : sel.curve) {
          curve.push_back({{"k", s.k},
                           {"distortion", s.distortion},
                           {"silhouette", s.silhouette},
                           {"calinski_harabasz", std::isinf(s.calinski_harabasz) ? json("inf")
                                                                                 : json(s.calinski_harabasz)}});
        }
        evaluation["k_selection"] = {{"chosen_k", sel.chosen_k}, {"curve", curve},
                                     {"restarts", cfg.restarts}, {"seed", cfg.cluster_seed},
                                     {"points", rows.size()}};
        log << "clusters: k=" << sel.chosen_k << " over " << rows.size() << " outputs\n";
      }
    } catch (const Error& e) {
      const auto c = e.code();
      if (c != ErrorCode::BackendUnreachable && c != ErrorCode::Timeout && c != ErrorCode::MalformedResponse &&
          c != ErrorCode::DimensionMismatch) {
        throw;
      }
      summary.embeddings = false;
      evaluation["embedding"] = nullptr;
      evaluation["adjective_distance"] = json::object();
      evaluation["sentence_distance"] = json::object();
      evaluation["k_selection"] = nullptr;
      for (auto& m : metrics) m.cluster.reset();
      note(std::string("embedding backend failed, embedding tables disabled: ") + e.what());
    }
  }
  evaluation["notes"] = summary.notes;

  std::vector<json> rows;
  for (const auto& m : metrics) rows.push_back(m.to_json());
  write_file(cfg.metrics_path(), to_jsonl(rows));
  write_file(cfg.evaluation_path(), evaluation.dump(2) + "\n");
  log << summary.scored << " valid entity outputs scored\n";
  return summary;
}

annotation::AnnotationStore open_annotation_store(const RunConfig& cfg) {
  require_file(cfg.store_path(), "entailment store (run `generate` first)");
  std::vector<Entailment> valid;
  for (auto& e : genclient::EntailmentStore::load(cfg.store_path())) {
    if (e.valid) valid.push_back(std::move(e));
  }
  return annotation::AnnotationStore(std::move(valid), cfg.annotation_log());
}

std::size_t cmd_import_annotations(const RunConfig& cfg, const fs::path& csv, std::ostream& log) {
  require_file(csv, "annotation CSV");
  const auto records = annotation::read_annotations_csv(csv);
  auto store = open_annotation_store(cfg);
  // Check every row before the first write so a bad file leaves the log untouched.
  for (const auto& r : records) {
    if (!store.find(r.entailment_id)) throw Error(ErrorCode::UnknownEntailment, "unknown entailment '" + r.entailment_id + "'");
    if (r.characterizing && !r.relevant) {
      throw Error(ErrorCode::InvariantViolation, r.entailment_id + " by " + r.annotator_id +
                                                     ": characterizing output must also be relevant");
    }
  }
  for (const auto& r : records) store.submit(r);
  log << records.size() << " annotations imported into " << cfg.annotation_log().string() << "\n";
  const auto annotators = store.annotators();
  for (std::size_t i = 0; i < annotators.size(); ++i) {
    for (std::size_t j = i + 1; j < annotators.size(); ++j) {
      try {
        const auto rep = annotation::agreement_report(store.records(), annotators[i], annotators[j]);
        log << "kappa " << annotators[i] << "/" << annotators[j] << " n=" << rep.n << " relevant="
            << (rep.kappa_relevant ? format_fixed(*rep.kappa_relevant, 4) : "n/a") << " characterizing="
            << (rep.kappa_characterizing ? format_fixed(*rep.kappa_characterizing, 4) : "n/a") << "\n";
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoOverlap) throw;
      }
    }
  }
  return records.size();
}

report::ReportInputs collect_report_inputs(const RunConfig& cfg) {
  const auto cat = cfg.catalog();
  const auto labels = prefix_labels(cfg, cat);
  report::ReportInputs in;
  in.run_id = cfg.run_id;
  in.entity_source_decimals = cfg.entity_source_decimals;
  in.distance_metric = cfg.distance_metric;

  const bool have_manifest = fs::is_regular_file(cfg.manifest_path());
  const bool have_metrics = fs::is_regular_file(cfg.metrics_path()) && fs::is_regular_file(cfg.evaluation_path());
  if (!have_manifest) throw Error(ErrorCode::EmptySet, "nothing to report: no run manifest at " + cfg.manifest_path().string());
  const auto manifest = load_manifest(cfg);

  in.manifest.emplace_back("config_hash", cfg.hash);
  in.manifest.emplace_back("template_catalog_hash", manifest.template_catalog_hash);
  std::string backends;
  for (const auto& b : manifest.backends) {
    if (!backends.empty()) backends += ", ";
    backends += b.model_tag + (b.reference ? " (reference)" : "") + " " + b.endpoint;
  }
  in.manifest.emplace_back("backends", backends);
  in.manifest.emplace_back("n_target", std::to_string(manifest.n_target));
  in.manifest.emplace_back("max_attempts", std::to_string(manifest.max_attempts));
  in.manifest.emplace_back("entailments_sha256", file_sha256(cfg.store_path()));
  in.provenance.generation = "store/manifest.json; backends: " + backends + "; n_target=" +
                             std::to_string(manifest.n_target) + ", max_attempts=" +
                             std::to_string(manifest.max_attempts);

  // Fail counts over adapted backends, one row per prompt template.
  {
    std::vector<std::string> order;
    for (const auto& id : cfg.prefix_ids) order.push_back("prefix." + id);
    for (const auto& id : cfg.tweet_template_ids) order.push_back(id);
    std::map<std::string, report::FailCountRow> rows;
    for (const auto& o : manifest.outcomes) {
      if (is_reference(manifest, o.model_tag)) continue;
      auto& r = rows[o.template_id];
      ++r.runs;
      r.attempts += o.attempts;
      r.valid += o.valid;
      r.fail_count += o.fail_count;
      r.exhausted += o.status == genclient::PromptStatus::Exhausted;
      r.failed += o.status == genclient::PromptStatus::Failed;
    }
    std::vector<report::FailCountRow> table;
    for (const auto& id : order) {
      auto it = rows.find(id);
      if (it == rows.end()) continue;
      auto row = it->second;
      row.prompt = id.rfind("prefix.", 0) == 0 ? prefix_label(cat, id.substr(7)) : id;
      table.push_back(row);
    }
    if (table.empty()) in.absent_reasons["fail_counts"] = "no adapted backend outcomes";
    else in.fail_counts = std::move(table);
  }

  std::vector<MetricRecord> metrics;
  json evaluation;
  if (have_metrics) {
    metrics = load_metrics(cfg);
    evaluation = json::parse(read_file(cfg.evaluation_path()));
    in.provenance.sentiment = evaluation.value("sentiment", "");
    in.provenance.adjectives = evaluation.value("adjectives", "");
    in.manifest.emplace_back("sentiment", in.provenance.sentiment);
    in.manifest.emplace_back("adjectives", in.provenance.adjectives);
  } else {
    for (const auto* t : {"sentiment_by_prompt", "sentiment_by_entity_source", "adjective_presence",
                          "prompt_performance", "cluster_crosstab", "k_selection_curves"}) {
      in.absent_reasons[t] = "evaluation not run";
    }
  }

  std::vector<nlpmetrics::SentimentRow> sentiment_rows;
  std::vector<nlpmetrics::AdjectivePresenceRow> adjective_rows;
  if (have_metrics) {
    const auto sgroups = group_by_prefix(metrics, labels, &MetricRecord::sentiment);
    const auto agroups = group_by_prefix(metrics, labels, &MetricRecord::adjectives);
    if (sgroups.empty()) {
      in.absent_reasons["sentiment_by_prompt"] = "no valid adapted entity outputs";
      in.absent_reasons["adjective_presence"] = "no valid adapted entity outputs";
      in.absent_reasons["sentiment_by_entity_source"] = "no valid adapted entity outputs";
    } else {
      sentiment_rows = nlpmetrics::sentiment_ratio_table(sgroups);
      adjective_rows = nlpmetrics::adjective_presence_table(agroups);
      in.sentiment_by_prompt = sentiment_rows;
      in.adjective_presence = adjective_rows;
      std::vector<nlpmetrics::EntitySourceObservation> obs;
      for (const auto& m : metrics) {
        if (!m.reference) obs.push_back({m.entity, m.model_tag, m.sentiment.value == nlpmetrics::Polarity::Positive});
      }
      std::vector<std::string> entities, sources;
      for (const auto& e : cfg.entities) entities.push_back(e.name);
      for (const auto& b : manifest.backends) {
        if (!b.reference) sources.push_back(b.model_tag);
      }
      in.sentiment_by_entity_source = nlpmetrics::entity_source_sentiment_table(obs, entities, sources);
    }
  }

  // Annotations.
  auto store = open_annotation_store(cfg);
  const auto records = store.records();
  in.provenance.annotation = "annotations/log.jsonl (" + std::to_string(records.size()) +
                             " current labels); consensus over all annotators, min_annotators=" +
                             std::to_string(cfg.min_annotators);
  in.manifest.emplace_back("annotation_records", std::to_string(records.size()));
  if (fs::is_regular_file(cfg.annotation_log())) {
    in.manifest.emplace_back("annotation_log_sha256", file_sha256(cfg.annotation_log()));
  }
  std::vector<annotation::PromptRelevanceRow> relevance_rows;
  std::map<std::string, annotation::Category> consensus_of;
  if (records.empty()) {
    for (const auto* t : {"relevance_summary", "per_prompt_relevance", "agreement"}) in.absent_reasons[t] = "no annotations";
  } else {
    in.relevance_summary = annotation::relevance_summary(records, cfg.min_annotators);
    std::map<std::string, std::string> group_of;
    for (const auto& e : store.entailments()) {
      if (e.kind == promptkit::PromptKind::EntityPrefix && !is_reference(manifest, e.model_tag)) {
        group_of[e.id] = prefix_label(cat, e.prefix_id);
      }
    }
    relevance_rows = annotation::per_prompt_relevance(records, group_of, labels, cfg.min_annotators);
    in.per_prompt_relevance = relevance_rows;
    for (const auto& c : annotation::consensus(records, cfg.min_annotators)) {
      if (c.agreed) consensus_of[c.entailment_id] = c.category;
    }

    auto pairs = cfg.agreement_pairs;
    if (pairs.empty()) {
      const auto names = store.annotators();
      for (std::size_t i = 0; i < names.size(); ++i) {
        for (std::size_t j = i + 1; j < names.size(); ++j) pairs.emplace_back(names[i], names[j]);
      }
    }
    std::vector<annotation::AgreementReport> agreement;
    for (const auto& [a, b] : pairs) {
      try {
        agreement.push_back(annotation::agreement_report(records, a, b));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NoOverlap) throw;
      }
    }
    if (agreement.empty()) in.absent_reasons["agreement"] = "no annotator pair shares an entailment";
    else in.agreement = std::move(agreement);
  }

  if (have_metrics) {
    if (!evaluation["embedding"].is_null()) {
      const auto& emb = evaluation["embedding"];
      in.provenance.embedding = "embeddings " + emb.value("tag", std::string()) + ", " + cfg.distance_metric +
                                " centroid distance to the reference backend";
      in.manifest.emplace_back("embedding", emb.value("tag", std::string()));
    } else {
      in.provenance.embedding = "no embeddings";
    }
    if (!sentiment_rows.empty()) {
      in.prompt_performance = report::build_prompt_performance(
          labels, evaluation["adjective_distance"].get<std::map<std::string, double>>(),
          evaluation["sentence_distance"].get<std::map<std::string, double>>(), adjective_rows, sentiment_rows,
          relevance_rows);
    } else {
      in.absent_reasons["prompt_performance"] = "no valid adapted entity outputs";
    }

    const auto& ks = evaluation["k_selection"];
    if (ks.is_null()) {
      const auto reason = evaluation["notes"].empty() ? std::string("clustering not run")
                                                      : evaluation["notes"].back().get<std::string>();
      in.absent_reasons["cluster_crosstab"] = reason;
      in.absent_reasons["k_selection_curves"] = reason;
    } else {
      in.chosen_k = ks["chosen_k"].get<std::size_t>();
      std::vector<clusterlab::KScore> curve;
      for (const auto& s : ks["curve"]) {
        const auto& ch = s["calinski_harabasz"];
        curve.push_back({s["k"].get<std::size_t>(), s["distortion"].get<double>(), s["silhouette"].get<double>(),
                         ch.is_string() ? std::numeric_limits<double>::infinity() : ch.get<double>()});
      }
      in.k_selection = std::move(curve);
      in.provenance.clustering = "k-means++ best of " + std::to_string(ks["restarts"].get<int>()) + " restarts, seed " +
                                 std::to_string(ks["seed"].get<std::uint64_t>()) + ", k by silhouette, " +
                                 std::to_string(ks["points"].get<std::size_t>()) + " adapted outputs; " +
                                 in.provenance.embedding;

      std::vector<report::CrosstabRow> rows(in.chosen_k);
      for (std::size_t c = 0; c < rows.size(); ++c) rows[c].cluster = c;
      for (const auto& m : metrics) {
        if (!m.cluster) continue;
        auto& r = rows.at(*m.cluster);
        (m.sentiment.value == nlpmetrics::Polarity::Positive ? r.positive : r.negative)++;
        (m.adjectives.empty() ? r.adjective_absent : r.adjective_present)++;
        auto it = consensus_of.find(m.id);
        if (it == consensus_of.end()) {
          ++r.unannotated;
        } else {
          switch (it->second) {
            case annotation::Category::NonRelevant: ++r.irrelevant; break;
            case annotation::Category::OnlyRelevant: ++r.only_relevant; break;
            case annotation::Category::RelevantAndCharacterizing: ++r.relevant_and_characterizing; break;
          }
        }
      }
      in.cluster_crosstab = std::move(rows);
    }
  }
  return in;
}

report::ReportBundle cmd_report(const RunConfig& cfg, std::ostream& log) {
  const auto bundle = report::build_bundle(collect_report_inputs(cfg));
  if (bundle.tables.empty()) throw Error(ErrorCode::EmptySet, "nothing computed for run " + cfg.run_id);
  for (const auto& p : report::emit(bundle, cfg.report_dir())) log << "wrote " << p.string() << "\n";
  for (const auto& a : bundle.absent) log << "absent " << a.name << ": " << a.reason << "\n";
  return bundle;
}

}  // namespace charprobe::pipeline
