#include "charprobe/annotation/agreement.hpp"

#include <map>

#include "charprobe/common/decimal.hpp"
#include "charprobe/common/error.hpp"

namespace charprobe::annotation {

double cohen_kappa(const std::vector<bool>& a, const std::vector<bool>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error(ErrorCode::LengthMismatch,
                "kappa needs equal non-empty lists (" + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
  const double n = static_cast<double>(a.size());
  std::size_t agree = 0, a_true = 0, b_true = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    agree += a[i] == b[i];
    a_true += a[i];
    b_true += b[i];
  }
  const double po = static_cast<double>(agree) / n;
  const double pa = static_cast<double>(a_true) / n;
  const double pb = static_cast<double>(b_true) / n;
  const double pe = pa * pb + (1.0 - pa) * (1.0 - pb);
  if (pe >= 1.0) throw Error(ErrorCode::DegenerateMarginals, "both annotators used a single class");
  return (po - pe) / (1.0 - pe);
}

namespace {

std::optional<double> kappa_or_absent(const std::vector<bool>& a, const std::vector<bool>& b) {
  try {
    return cohen_kappa(a, b);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DegenerateMarginals) return std::nullopt;
    throw;
  }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

Category category_of(const AnnotationRecord& r) {
  if (!r.relevant) return Category::NonRelevant;
  return r.characterizing ? Category::RelevantAndCharacterizing : Category::OnlyRelevant;
}

}  // namespace

json AgreementReport::to_json() const {
  return {{"annotator_a", annotator_a},
          {"annotator_b", annotator_b},
          {"n", n},
          {"kappa_relevant", optional_number(kappa_relevant)},
          {"kappa_characterizing", optional_number(kappa_characterizing)},
          {"agreed_characterizing", agreed_characterizing},
          {"agreed_characterizing_true", agreed_characterizing_true},
          {"pct_characterizing", optional_number(pct_characterizing)}};
}

AgreementReport agreement_report(const std::vector<AnnotationRecord>& records, const std::string& a,
                                 const std::string& b) {
  std::map<std::string, const AnnotationRecord*> by_a, by_b;
  for (const auto& r : records) {
    if (r.annotator_id == a) by_a[r.entailment_id] = &r;
    if (r.annotator_id == b) by_b[r.entailment_id] = &r;
  }
  std::vector<bool> rel_a, rel_b, char_a, char_b;
  AgreementReport rep;
  rep.annotator_a = a;
  rep.annotator_b = b;
  for (const auto& [id, ra] : by_a) {
    auto it = by_b.find(id);
    if (it == by_b.end()) continue;
    const auto* rb = it->second;
    rel_a.push_back(ra->relevant);
    rel_b.push_back(rb->relevant);
    char_a.push_back(ra->characterizing);
    char_b.push_back(rb->characterizing);
    if (ra->characterizing == rb->characterizing) {
      ++rep.agreed_characterizing;
      rep.agreed_characterizing_true += ra->characterizing;
    }
  }
  rep.n = rel_a.size();
  if (rep.n == 0 || a == b) throw Error(ErrorCode::NoOverlap, "annotators '" + a + "' and '" + b + "' share no entailment");
  rep.kappa_relevant = kappa_or_absent(rel_a, rel_b);
  rep.kappa_characterizing = kappa_or_absent(char_a, char_b);
  rep.pct_characterizing = percentage(static_cast<std::int64_t>(rep.agreed_characterizing_true),
                                      static_cast<std::int64_t>(rep.agreed_characterizing));
  return rep;
}

std::vector<ConsensusItem> consensus(const std::vector<AnnotationRecord>& records, std::size_t min_annotators) {
  std::map<std::string, std::vector<const AnnotationRecord*>> by_id;
  for (const auto& r : records) by_id[r.entailment_id].push_back(&r);
  std::vector<ConsensusItem> out;
  for (const auto& [id, recs] : by_id) {
    if (recs.size() < min_annotators) continue;
    ConsensusItem item;
    item.entailment_id = id;
    item.annotators = recs.size();
    item.category = category_of(*recs.front());
    item.agreed = true;
    for (const auto* r : recs) item.agreed = item.agreed && category_of(*r) == item.category;
    out.push_back(item);
  }
  return out;
}

json RelevanceSummary::to_json() const {
  return {{"non_relevant", non_relevant},
          {"only_relevant", only_relevant},
          {"relevant_and_characterizing", relevant_and_characterizing},
          {"total_relevant", total_relevant},
          {"consensus_total", consensus_total},
          {"disagreements", disagreements},
          {"pct_non_relevant", optional_number(pct_non_relevant)},
          {"pct_only_relevant", optional_number(pct_only_relevant)},
          {"pct_relevant_and_characterizing", optional_number(pct_relevant_and_characterizing)},
          {"pct_total_relevant", optional_number(pct_total_relevant)},
          {"pct_characterizing_given_relevant", optional_number(pct_characterizing_given_relevant)}};
}

RelevanceSummary relevance_summary(const std::vector<AnnotationRecord>& records, std::size_t min_annotators) {
  RelevanceSummary s;
  for (const auto& item : consensus(records, min_annotators)) {
    if (!item.agreed) {
      ++s.disagreements;
      continue;
    }
    switch (item.category) {
      case Category::NonRelevant: ++s.non_relevant; break;
      case Category::OnlyRelevant: ++s.only_relevant; break;
      case Category::RelevantAndCharacterizing: ++s.relevant_and_characterizing; break;
    }
  }
  s.total_relevant = s.only_relevant + s.relevant_and_characterizing;
  s.consensus_total = s.non_relevant + s.total_relevant;
  const auto total = static_cast<std::int64_t>(s.consensus_total);
  s.pct_non_relevant = percentage(static_cast<std::int64_t>(s.non_relevant), total);
  s.pct_only_relevant = percentage(static_cast<std::int64_t>(s.only_relevant), total);
  s.pct_relevant_and_characterizing = percentage(static_cast<std::int64_t>(s.relevant_and_characterizing), total);
  s.pct_total_relevant = percentage(static_cast<std::int64_t>(s.total_relevant), total);
  s.pct_characterizing_given_relevant = percentage(static_cast<std::int64_t>(s.relevant_and_characterizing),
                                                   static_cast<std::int64_t>(s.total_relevant));
  return s;
}

std::vector<PromptRelevanceRow> per_prompt_relevance(const std::vector<AnnotationRecord>& records,
                                                     const std::map<std::string, std::string>& group_of,
                                                     const std::vector<std::string>& group_order,
                                                     std::size_t min_annotators) {
  std::map<std::string, PromptRelevanceRow> rows;
  for (const auto& g : group_order) rows[g].group = g;
  for (const auto& item : consensus(records, min_annotators)) {
    if (!item.agreed) continue;
    auto g = group_of.find(item.entailment_id);
    if (g == group_of.end()) continue;
    auto it = rows.find(g->second);
    if (it == rows.end()) continue;
    auto& row = it->second;
    ++row.n;
    if (item.category != Category::NonRelevant) ++row.relevant;
    if (item.category == Category::RelevantAndCharacterizing) ++row.relevant_and_characterizing;
  }
  std::vector<PromptRelevanceRow> out;
  for (const auto& g : group_order) {
    auto row = rows[g];
    const auto n = static_cast<std::int64_t>(row.n);
    row.pct_relevant_and_characterizing = percentage(static_cast<std::int64_t>(row.relevant_and_characterizing), n);
    row.pct_relevant = percentage(static_cast<std::int64_t>(row.relevant), n);
    row.pct_characterizing_given_relevant = percentage(static_cast<std::int64_t>(row.relevant_and_characterizing),
                                                       static_cast<std::int64_t>(row.relevant));
    out.push_back(row);
  }
  return out;
}

}  // namespace charprobe::annotation
