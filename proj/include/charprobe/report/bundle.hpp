#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "charprobe/annotation/agreement.hpp"
#include "charprobe/clusterlab/kmeans.hpp"
#include "charprobe/nlpmetrics/tables.hpp"
#include "charprobe/report/table.hpp"

namespace charprobe::report {

struct FailCountRow {
  std::string prompt;
  std::size_t runs = 0;  // (prompt, backend, entity) collections
  std::size_t attempts = 0;
  std::size_t valid = 0;
  std::size_t fail_count = 0;
  std::size_t exhausted = 0;
  std::size_t failed = 0;
};

// One prefix column of the prompt-performance table.
struct PromptPerformanceColumn {
  std::string prefix;
  std::optional<double> adjective_distance;
  std::optional<double> sentence_distance;
  std::optional<double> pct_adjectives;
  std::optional<double> pct_positive;
  std::optional<double> pct_negative;
  std::optional<double> pct_characterizing;
};

struct CrosstabRow {
  std::size_t cluster = 0;
  std::size_t negative = 0;
  std::size_t positive = 0;
  std::size_t adjective_absent = 0;
  std::size_t adjective_present = 0;
  std::size_t irrelevant = 0;
  std::size_t only_relevant = 0;
  std::size_t relevant_and_characterizing = 0;
  std::size_t unannotated = 0;  // no consensus label
};

struct Provenance {
  std::string generation;
  std::string sentiment;
  std::string adjectives;
  std::string embedding;
  std::string annotation;
  std::string clustering;
};

// Everything a bundle is built from. Unset members become entries in
// ReportBundle::absent with the reason from absent_reasons.
struct ReportInputs {
  std::string run_id;
  std::vector<std::pair<std::string, std::string>> manifest;
  Provenance provenance;
  std::map<std::string, std::string> absent_reasons;

  std::optional<std::vector<FailCountRow>> fail_counts;
  std::optional<std::vector<nlpmetrics::SentimentRow>> sentiment_by_prompt;
  std::optional<nlpmetrics::SentimentGrid> sentiment_by_entity_source;
  int entity_source_decimals = 1;
  std::optional<std::vector<nlpmetrics::AdjectivePresenceRow>> adjective_presence;
  std::optional<annotation::RelevanceSummary> relevance_summary;
  std::optional<std::vector<annotation::PromptRelevanceRow>> per_prompt_relevance;
  std::optional<std::vector<annotation::AgreementReport>> agreement;
  std::optional<std::vector<PromptPerformanceColumn>> prompt_performance;
  std::optional<std::vector<CrosstabRow>> cluster_crosstab;
  std::optional<std::vector<clusterlab::KScore>> k_selection;
  std::size_t chosen_k = 0;
  std::string distance_metric = "cosine";
};

// Joins per-prefix metrics into columns in `prefixes` order. Rows are
// matched by group name; a missing family leaves its cells absent.
std::vector<PromptPerformanceColumn> build_prompt_performance(
    const std::vector<std::string>& prefixes, const std::map<std::string, double>& adjective_distance,
    const std::map<std::string, double>& sentence_distance,
    const std::vector<nlpmetrics::AdjectivePresenceRow>& adjectives,
    const std::vector<nlpmetrics::SentimentRow>& sentiment,
    const std::vector<annotation::PromptRelevanceRow>& relevance);

// Table order is fixed: fail_counts, sentiment_by_prompt,
// sentiment_by_entity_source, adjective_presence, relevance_summary,
// per_prompt_relevance, agreement, prompt_performance, cluster_crosstab,
// k_selection_curves.
ReportBundle build_bundle(const ReportInputs& in);

}  // namespace charprobe::report
