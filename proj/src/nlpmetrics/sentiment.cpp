#include "charprobe/nlpmetrics/sentiment.hpp"

#include "charprobe/common/error.hpp"
#include "charprobe/common/http_json.hpp"
#include "charprobe/common/text.hpp"

namespace charprobe::nlpmetrics {

std::string_view to_string(Polarity p) { return p == Polarity::Positive ? "Positive" : "Negative"; }

Polarity polarity_from_string(std::string_view s) {
  const auto low = text::to_lower(text::trim(s));
  if (low == "positive" || low == "pos") return Polarity::Positive;
  if (low == "negative" || low == "neg") return Polarity::Negative;
  throw Error(ErrorCode::MalformedResponse, "unknown sentiment label '" + std::string(s) + "'");
}

LexiconSentiment::LexiconSentiment(SectionedLexicon lexicon, bool tie_positive)
    : lexicon_(std::move(lexicon)), tie_positive_(tie_positive) {
  if (lexicon_.section("positive").empty() || lexicon_.section("negative").empty()) {
    throw Error(ErrorCode::InvalidConfig, "sentiment lexicon needs [positive] and [negative] sections");
  }
}

LexiconSentiment LexiconSentiment::load(const std::filesystem::path& path, bool tie_positive) {
  return LexiconSentiment(SectionedLexicon::load(path), tie_positive);
}

SentimentLabel LexiconSentiment::score(std::string_view s) const {
  if (text::trim(s).empty()) throw Error(ErrorCode::EmptyText, "sentiment of empty text");
  double score = 0;
  for (const auto& tok : word_tokens(s)) {
    if (lexicon_.contains("positive", tok)) score += 1;
    if (lexicon_.contains("negative", tok)) score -= 1;
  }
  SentimentLabel label;
  label.score = score;
  if (score > 0) {
    label.value = Polarity::Positive;
  } else if (score < 0) {
    label.value = Polarity::Negative;
  } else {
    label.value = tie_positive_ ? Polarity::Positive : Polarity::Negative;
  }
  return label;
}

std::vector<SentimentLabel> LexiconSentiment::classify(const std::vector<std::string>& texts) const {
  std::vector<SentimentLabel> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(score(t));
  return out;
}

RemoteSentiment::RemoteSentiment(std::string endpoint, std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {}

std::vector<SentimentLabel> RemoteSentiment::classify(const std::vector<std::string>& texts) const {
  for (const auto& t : texts) {
    if (text::trim(t).empty()) throw Error(ErrorCode::EmptyText, "sentiment of empty text");
  }
  if (texts.empty()) return {};
  const auto reply = net::call_json(net::parse_endpoint(endpoint_), "/classify", {{"texts", texts}}, timeout_);
  if (!reply.is_object() || !reply.contains("labels") || !reply["labels"].is_array() ||
      reply["labels"].size() != texts.size()) {
    throw Error(ErrorCode::MalformedResponse, "/classify reply must carry one label per text");
  }
  std::vector<SentimentLabel> out;
  for (const auto& item : reply["labels"]) {
    SentimentLabel label;
    if (item.is_string()) {
      label.value = polarity_from_string(item.get<std::string>());
      label.score = label.value == Polarity::Positive ? 1.0 : -1.0;
    } else if (item.is_object() && item.contains("label") && item["label"].is_string()) {
      label.value = polarity_from_string(item["label"].get<std::string>());
      label.score = item.value("score", label.value == Polarity::Positive ? 1.0 : -1.0);
    } else {
      throw Error(ErrorCode::MalformedResponse, "bad label entry: " + item.dump());
    }
    out.push_back(label);
  }
  return out;
}

SentimentLabel sentiment(std::string_view s, const LexiconSentiment& classifier) { return classifier.score(s); }

}  // namespace charprobe::nlpmetrics
