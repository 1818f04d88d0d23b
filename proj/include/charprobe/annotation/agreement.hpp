#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "charprobe/annotation/record.hpp"

namespace charprobe::annotation {

// (p_o - p_e) / (1 - p_e). LengthMismatch for unequal or empty lists,
// DegenerateMarginals when p_e == 1.
double cohen_kappa(const std::vector<bool>& a, const std::vector<bool>& b);

struct AgreementReport {
  std::string annotator_a;
  std::string annotator_b;
  std::size_t n = 0;  // co-annotated entailments
  std::optional<double> kappa_relevant;        // absent when marginals are degenerate
  std::optional<double> kappa_characterizing;
  std::size_t agreed_characterizing = 0;       // both gave the same characterizing label
  std::size_t agreed_characterizing_true = 0;  // ... and it was true
  std::optional<double> pct_characterizing;    // 100 * true / agreed
  json to_json() const;
};

// NoOverlap when the two annotators share no entailment.
AgreementReport agreement_report(const std::vector<AnnotationRecord>& records, const std::string& a,
                                 const std::string& b);

enum class Category { NonRelevant, OnlyRelevant, RelevantAndCharacterizing };

// An entailment is in consensus when every annotator who labeled it gave
// the same (relevant, characterizing) pair.
struct ConsensusItem {
  std::string entailment_id;
  std::size_t annotators = 0;
  bool agreed = false;
  Category category = Category::NonRelevant;  // meaningful only when agreed
};

std::vector<ConsensusItem> consensus(const std::vector<AnnotationRecord>& records, std::size_t min_annotators = 1);

struct RelevanceSummary {
  std::size_t non_relevant = 0;
  std::size_t only_relevant = 0;
  std::size_t relevant_and_characterizing = 0;
  std::size_t total_relevant = 0;
  std::size_t consensus_total = 0;
  std::size_t disagreements = 0;
  // Percentages of consensus_total; absent when it is zero.
  std::optional<double> pct_non_relevant;
  std::optional<double> pct_only_relevant;
  std::optional<double> pct_relevant_and_characterizing;
  std::optional<double> pct_total_relevant;
  std::optional<double> pct_characterizing_given_relevant;
  json to_json() const;
};

RelevanceSummary relevance_summary(const std::vector<AnnotationRecord>& records, std::size_t min_annotators = 1);

struct PromptRelevanceRow {
  std::string group;
  std::size_t n = 0;  // consensus entailments in the group
  std::size_t relevant = 0;
  std::size_t relevant_and_characterizing = 0;
  std::optional<double> pct_relevant_and_characterizing;
  std::optional<double> pct_relevant;
  std::optional<double> pct_characterizing_given_relevant;
};

// group_of maps entailment id -> group (prefix id). Rows follow
// group_order; ids with no group are ignored.
std::vector<PromptRelevanceRow> per_prompt_relevance(const std::vector<AnnotationRecord>& records,
                                                     const std::map<std::string, std::string>& group_of,
                                                     const std::vector<std::string>& group_order,
                                                     std::size_t min_annotators = 1);

}  // namespace charprobe::annotation
