#include "charprobe/nlpmetrics/tables.hpp"

#include <algorithm>
#include <map>

#include "charprobe/common/error.hpp"

namespace charprobe::nlpmetrics {

std::vector<AdjectivePresenceRow> adjective_presence_table(const Groups<AdjectiveSet>& groups) {
  std::vector<AdjectivePresenceRow> rows;
  for (const auto& [name, sets] : groups) {
    if (sets.empty()) throw Error(ErrorCode::EmptySet, "adjective group '" + name + "' is empty");
    AdjectivePresenceRow row{name, 0, 0};
    for (const auto& s : sets) (s.empty() ? row.absent : row.present)++;
    rows.push_back(row);
  }
  return rows;
}

std::vector<SentimentRow> sentiment_ratio_table(const Groups<SentimentLabel>& groups) {
  std::vector<SentimentRow> rows;
  for (const auto& [name, labels] : groups) {
    if (labels.empty()) throw Error(ErrorCode::EmptySet, "sentiment group '" + name + "' is empty");
    SentimentRow row;
    row.group = name;
    for (const auto& l : labels) (l.value == Polarity::Positive ? row.positive : row.negative)++;
    const double total = static_cast<double>(row.positive + row.negative);
    row.pct_positive = 100.0 * static_cast<double>(row.positive) / total;
    row.pct_negative = 100.0 * static_cast<double>(row.negative) / total;
    rows.push_back(row);
  }
  return rows;
}

SentimentGrid entity_source_sentiment_table(const std::vector<EntitySourceObservation>& obs,
                                            std::vector<std::string> entity_order,
                                            std::vector<std::string> source_order) {
  auto append_missing = [](std::vector<std::string>& order, const std::string& key) {
    if (std::find(order.begin(), order.end(), key) == order.end()) order.push_back(key);
  };
  for (const auto& o : obs) {
    append_missing(entity_order, o.entity);
    append_missing(source_order, o.source);
  }
  std::map<std::pair<std::string, std::string>, std::pair<std::size_t, std::size_t>> cells;  // (pos, total)
  for (const auto& o : obs) {
    auto& c = cells[{o.entity, o.source}];
    if (o.positive) ++c.first;
    ++c.second;
  }
  SentimentGrid grid;
  grid.entities = std::move(entity_order);
  grid.sources = std::move(source_order);
  for (const auto& e : grid.entities) {
    std::vector<std::optional<double>> pct;
    std::vector<std::size_t> totals;
    for (const auto& s : grid.sources) {
      auto it = cells.find({e, s});
      if (it == cells.end()) {
        pct.push_back(std::nullopt);
        totals.push_back(0);
      } else {
        pct.push_back(100.0 * static_cast<double>(it->second.first) / static_cast<double>(it->second.second));
        totals.push_back(it->second.second);
      }
    }
    grid.pct_positive.push_back(std::move(pct));
    grid.totals.push_back(std::move(totals));
  }
  return grid;
}

}  // namespace charprobe::nlpmetrics
