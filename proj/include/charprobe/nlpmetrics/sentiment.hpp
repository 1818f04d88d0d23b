#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

#include "charprobe/nlpmetrics/lexicon.hpp"

namespace charprobe::nlpmetrics {

enum class Polarity { Negative, Positive };
std::string_view to_string(Polarity p);
Polarity polarity_from_string(std::string_view s);

struct SentimentLabel {
  Polarity value = Polarity::Positive;
  double score = 0.0;
};

class SentimentClassifier {
 public:
  virtual ~SentimentClassifier() = default;
  virtual std::vector<SentimentLabel> classify(const std::vector<std::string>& texts) const = 0;
  virtual std::string tag() const = 0;
};

// score = positive hits - negative hits; Positive iff score >= 0 by default
// (ties go positive; flip with tie_positive = false).
class LexiconSentiment : public SentimentClassifier {
 public:
  LexiconSentiment(SectionedLexicon lexicon, bool tie_positive = true);
  static LexiconSentiment load(const std::filesystem::path& path, bool tie_positive = true);

  SentimentLabel score(std::string_view text) const;
  std::vector<SentimentLabel> classify(const std::vector<std::string>& texts) const override;
  std::string tag() const override { return "lexicon-sentiment"; }

 private:
  SectionedLexicon lexicon_;
  bool tie_positive_;
};

// POST {endpoint}/classify {"texts": [...]} -> {"labels": ["Positive"|"Negative", ...]}
class RemoteSentiment : public SentimentClassifier {
 public:
  explicit RemoteSentiment(std::string endpoint, std::chrono::milliseconds timeout = std::chrono::seconds(30));
  std::vector<SentimentLabel> classify(const std::vector<std::string>& texts) const override;
  std::string tag() const override { return "remote-sentiment:" + endpoint_; }

 private:
  std::string endpoint_;
  std::chrono::milliseconds timeout_;
};

// Lexicon default; throws EmptyText on blank input.
SentimentLabel sentiment(std::string_view text, const LexiconSentiment& classifier);

}  // namespace charprobe::nlpmetrics
