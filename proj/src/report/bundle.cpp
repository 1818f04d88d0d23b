#include "charprobe/report/bundle.hpp"

#include "charprobe/common/decimal.hpp"

namespace charprobe::report {

namespace {

constexpr int kPct = 2;

std::optional<double> pct(std::size_t num, std::size_t den) {
  return percentage(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

template <typename Row>
const Row* find_group(const std::vector<Row>& rows, const std::string& g) {
  for (const auto& r : rows) {
    if (r.group == g) return &r;
  }
  return nullptr;
}

std::optional<double> lookup(const std::map<std::string, double>& m, const std::string& k) {
  auto it = m.find(k);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

}  // namespace

std::vector<PromptPerformanceColumn> build_prompt_performance(
    const std::vector<std::string>& prefixes, const std::map<std::string, double>& adjective_distance,
    const std::map<std::string, double>& sentence_distance,
    const std::vector<nlpmetrics::AdjectivePresenceRow>& adjectives,
    const std::vector<nlpmetrics::SentimentRow>& sentiment,
    const std::vector<annotation::PromptRelevanceRow>& relevance) {
  std::vector<PromptPerformanceColumn> cols;
  for (const auto& p : prefixes) {
    PromptPerformanceColumn c;
    c.prefix = p;
    c.adjective_distance = lookup(adjective_distance, p);
    c.sentence_distance = lookup(sentence_distance, p);
    if (const auto* a = find_group(adjectives, p)) c.pct_adjectives = pct(a->present, a->present + a->absent);
    if (const auto* s = find_group(sentiment, p)) {
      c.pct_positive = s->pct_positive;
      c.pct_negative = s->pct_negative;
    }
    if (const auto* r = find_group(relevance, p)) c.pct_characterizing = r->pct_relevant_and_characterizing;
    cols.push_back(c);
  }
  return cols;
}

ReportBundle build_bundle(const ReportInputs& in) {
  ReportBundle b;
  b.run_id = in.run_id;
  b.manifest = in.manifest;
  b.manifest.emplace_back("distance_metric", in.distance_metric);

  auto absent = [&](const std::string& name) {
    auto it = in.absent_reasons.find(name);
    b.absent.push_back({name, it == in.absent_reasons.end() ? "not computed" : it->second});
  };

  if (in.fail_counts) {
    Table t{"fail_counts", "Failed outputs per prompt", in.provenance.generation,
            {"prompt", "runs", "attempts", "valid", "fail_count", "exhausted", "failed"}, {}};
    for (const auto& r : *in.fail_counts) {
      t.rows.push_back({Cell::text(r.prompt), Cell::count(r.runs), Cell::count(r.attempts), Cell::count(r.valid),
                        Cell::count(r.fail_count), Cell::count(r.exhausted), Cell::count(r.failed)});
    }
    b.tables.push_back(std::move(t));
  } else {
    absent("fail_counts");
  }

  if (in.sentiment_by_prompt) {
    Table t{"sentiment_by_prompt", "Sentiment of entailments per prefix-prompt", in.provenance.sentiment,
            {"prefix", "negative", "positive", "pct_positive", "pct_negative"}, {}};
    for (const auto& r : *in.sentiment_by_prompt) {
      t.rows.push_back({Cell::text(r.group), Cell::count(r.negative), Cell::count(r.positive),
                        Cell::number(r.pct_positive, kPct), Cell::number(r.pct_negative, kPct)});
    }
    b.tables.push_back(std::move(t));
  } else {
    absent("sentiment_by_prompt");
  }

  if (in.sentiment_by_entity_source) {
    const auto& g = *in.sentiment_by_entity_source;
    Table t{"sentiment_by_entity_source", "Positive sentiment percentage per entity and source",
            in.provenance.sentiment, {"entity"}, {}};
    for (const auto& s : g.sources) t.columns.push_back(s);
    for (std::size_t e = 0; e < g.entities.size(); ++e) {
      std::vector<Cell> row{Cell::text(g.entities[e])};
      for (std::size_t s = 0; s < g.sources.size(); ++s) {
        row.push_back(Cell::number(g.pct_positive[e][s], in.entity_source_decimals));
      }
      t.rows.push_back(std::move(row));
    }
    b.tables.push_back(std::move(t));
  } else {
    absent("sentiment_by_entity_source");
  }

  if (in.adjective_presence) {
    Table t{"adjective_presence", "Adjective tags in outputs per prefix-prompt", in.provenance.adjectives,
            {"prefix", "absent", "present"}, {}};
    for (const auto& r : *in.adjective_presence) {
      t.rows.push_back({Cell::text(r.group), Cell::count(r.absent), Cell::count(r.present)});
    }
    b.tables.push_back(std::move(t));
  } else {
    absent("adjective_presence");
  }

  if (in.relevance_summary) {
    const auto& s = *in.relevance_summary;
    Table t{"relevance_summary", "Relevant and characterizing outputs", in.provenance.annotation,
            {"measure", "count", "percentage"}, {}};
    t.rows.push_back({Cell::text("non_relevant"), Cell::count(s.non_relevant), Cell::number(s.pct_non_relevant, kPct)});
    t.rows.push_back({Cell::text("only_relevant"), Cell::count(s.only_relevant), Cell::number(s.pct_only_relevant, kPct)});
    t.rows.push_back({Cell::text("relevant_and_characterizing"), Cell::count(s.relevant_and_characterizing),
                      Cell::number(s.pct_relevant_and_characterizing, kPct)});
    t.rows.push_back({Cell::text("total_relevant"), Cell::count(s.total_relevant),
                      Cell::number(s.pct_total_relevant, kPct)});
    t.rows.push_back({Cell::text("characterizing_given_relevant"), Cell::count(s.relevant_and_characterizing),
                      Cell::number(s.pct_characterizing_given_relevant, kPct)});
    t.rows.push_back({Cell::text("consensus_total"), Cell::count(s.consensus_total), Cell::absent()});
    t.rows.push_back({Cell::text("disagreements"), Cell::count(s.disagreements), Cell::absent()});
    b.tables.push_back(std::move(t));
  } else {
    absent("relevance_summary");
  }

  if (in.per_prompt_relevance) {
    Table t{"per_prompt_relevance", "Relevant and characterizing outputs per prefix-prompt", in.provenance.annotation,
            {"prefix", "n", "pct_relevant_and_characterizing", "pct_relevant", "pct_characterizing_given_relevant"},
            {}};
    for (const auto& r : *in.per_prompt_relevance) {
      t.rows.push_back({Cell::text(r.group), Cell::count(r.n), Cell::number(r.pct_relevant_and_characterizing, kPct),
                        Cell::number(r.pct_relevant, kPct), Cell::number(r.pct_characterizing_given_relevant, kPct)});
    }
    b.tables.push_back(std::move(t));
  } else {
    absent("per_prompt_relevance");
  }

  if (in.agreement) {
    Table t{"agreement", "Agreement between annotators (Cohen's kappa)", in.provenance.annotation,
            {"annotator_a", "annotator_b", "n", "kappa_relevant", "kappa_characterizing", "pct_characterizing"}, {}};
    for (const auto& r : *in.agreement) {
      t.rows.push_back({Cell::text(r.annotator_a), Cell::text(r.annotator_b), Cell::count(r.n),
                        Cell::number(r.kappa_relevant, kPct), Cell::number(r.kappa_characterizing, kPct),
                        Cell::number(r.pct_characterizing, kPct)});
    }
    b.tables.push_back(std::move(t));
  } else {
    absent("agreement");
  }

  if (in.prompt_performance) {
    Table t{"prompt_performance", "Effects of prefix-prompts",
            in.provenance.embedding + "; " + in.provenance.adjectives + "; " + in.provenance.sentiment + "; " +
                in.provenance.annotation,
            {"measure"}, {}};
    const auto& cols = *in.prompt_performance;
    for (const auto& c : cols) t.columns.push_back(c.prefix);
    auto add = [&](const std::string& label, auto member, int decimals) {
      std::vector<Cell> row{Cell::text(label)};
      for (const auto& c : cols) row.push_back(Cell::number(c.*member, decimals));
      t.rows.push_back(std::move(row));
    };
    add("adjectives_centroid_distance (" + in.distance_metric + ")", &PromptPerformanceColumn::adjective_distance, 2);
    add("sentence_centroid_distance (" + in.distance_metric + ")", &PromptPerformanceColumn::sentence_distance, 2);
    add("pct_adjectives", &PromptPerformanceColumn::pct_adjectives, kPct);
    add("pct_positive_sentiment", &PromptPerformanceColumn::pct_positive, kPct);
    add("pct_negative_sentiment", &PromptPerformanceColumn::pct_negative, kPct);
    add("pct_characterizing_output", &PromptPerformanceColumn::pct_characterizing, kPct);
    b.tables.push_back(std::move(t));
  } else {
    absent("prompt_performance");
  }

  if (in.cluster_crosstab) {
    Table t{"cluster_crosstab", "Cluster analysis of outputs", in.provenance.clustering,
            {"cluster", "negative_sentiment", "positive_sentiment", "adjective_absent", "adjective_present",
             "irrelevant", "only_relevant", "relevant_and_characterizing", "unannotated"},
            {}};
    for (const auto& r : *in.cluster_crosstab) {
      t.rows.push_back({Cell::count(r.cluster), Cell::count(r.negative), Cell::count(r.positive),
                        Cell::count(r.adjective_absent), Cell::count(r.adjective_present), Cell::count(r.irrelevant),
                        Cell::count(r.only_relevant), Cell::count(r.relevant_and_characterizing),
                        Cell::count(r.unannotated)});
    }
    b.tables.push_back(std::move(t));
  } else {
    absent("cluster_crosstab");
  }

  if (in.k_selection) {
    Table t{"k_selection_curves", "Cluster count selection scores", in.provenance.clustering,
            {"k", "distortion", "silhouette", "calinski_harabasz", "chosen"}, {}};
    for (const auto& s : *in.k_selection) {
      t.rows.push_back({Cell::count(s.k), Cell::number(s.distortion, 4), Cell::number(s.silhouette, 4),
                        Cell::number(s.calinski_harabasz, 4), Cell::text(s.k == in.chosen_k ? "yes" : "no")});
    }
    b.tables.push_back(std::move(t));
  } else {
    absent("k_selection_curves");
  }
  return b;
}

}  // namespace charprobe::report
