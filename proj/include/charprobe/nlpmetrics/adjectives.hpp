#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "charprobe/nlpmetrics/lexicon.hpp"

namespace charprobe::nlpmetrics {

enum class AdjTag { JJ, JJR, JJS };
std::string_view to_string(AdjTag t);

struct Adjective {
  std::string token;
  AdjTag tag = AdjTag::JJ;
  bool operator==(const Adjective&) const = default;
};

struct AdjectiveSet {
  std::vector<Adjective> items;  // in text order, repeats kept
  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
};

class AdjectiveTagger {
 public:
  virtual ~AdjectiveTagger() = default;
  virtual AdjectiveSet tag(std::string_view text) const = 0;
  virtual std::string name() const = 0;
};

// Lexicon sections [JJ], [JJR], [JJS] give explicit tags. Words not listed
// are tagged by suffix when their stem is a listed adjective:
// "-est" -> JJS, "-er" -> JJR (greatest, kinder, bigger, happier).
class LexiconAdjectiveTagger : public AdjectiveTagger {
 public:
  explicit LexiconAdjectiveTagger(SectionedLexicon lexicon);
  static LexiconAdjectiveTagger load(const std::filesystem::path& path);

  AdjectiveSet tag(std::string_view text) const override;
  std::string name() const override { return "lexicon-adjectives"; }

 private:
  bool is_base(std::string_view w) const;
  bool has_stem(std::string_view word, std::string_view suffix) const;
  SectionedLexicon lexicon_;
};

// Throws EmptyText on blank input.
AdjectiveSet adjectives(std::string_view text, const AdjectiveTagger& tagger);

}  // namespace charprobe::nlpmetrics
