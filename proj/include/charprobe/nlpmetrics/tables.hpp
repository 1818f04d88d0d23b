#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "charprobe/nlpmetrics/adjectives.hpp"
#include "charprobe/nlpmetrics/sentiment.hpp"

namespace charprobe::nlpmetrics {

template <typename T>
using Groups = std::vector<std::pair<std::string, std::vector<T>>>;

struct AdjectivePresenceRow {
  std::string group;
  std::size_t absent = 0;
  std::size_t present = 0;
};

struct SentimentRow {
  std::string group;
  std::size_t negative = 0;
  std::size_t positive = 0;
  double pct_positive = 0.0;  // full precision; rounding happens at emission
  double pct_negative = 0.0;
};

// One row per group, in group order. Empty groups are an error.
std::vector<AdjectivePresenceRow> adjective_presence_table(const Groups<AdjectiveSet>& groups);
std::vector<SentimentRow> sentiment_ratio_table(const Groups<SentimentLabel>& groups);

struct EntitySourceObservation {
  std::string entity;
  std::string source;
  bool positive = false;
};

// Entities x sources grid of positive percentages. Cells without any
// observation are nullopt (absent), never zero.
struct SentimentGrid {
  std::vector<std::string> entities;
  std::vector<std::string> sources;
  std::vector<std::vector<std::optional<double>>> pct_positive;  // [entity][source]
  std::vector<std::vector<std::size_t>> totals;
};

SentimentGrid entity_source_sentiment_table(const std::vector<EntitySourceObservation>& obs,
                                            std::vector<std::string> entity_order = {},
                                            std::vector<std::string> source_order = {});

}  // namespace charprobe::nlpmetrics
