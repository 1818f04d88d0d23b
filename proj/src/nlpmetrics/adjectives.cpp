#include "charprobe/nlpmetrics/adjectives.hpp"

#include "charprobe/common/error.hpp"
#include "charprobe/common/text.hpp"

namespace charprobe::nlpmetrics {

std::string_view to_string(AdjTag t) {
  switch (t) {
    case AdjTag::JJ: return "JJ";
    case AdjTag::JJR: return "JJR";
    case AdjTag::JJS: return "JJS";
  }
  return "JJ";
}

LexiconAdjectiveTagger::LexiconAdjectiveTagger(SectionedLexicon lexicon) : lexicon_(std::move(lexicon)) {
  if (lexicon_.section("JJ").empty()) throw Error(ErrorCode::InvalidConfig, "adjective lexicon has no [JJ] section");
}

LexiconAdjectiveTagger LexiconAdjectiveTagger::load(const std::filesystem::path& path) {
  return LexiconAdjectiveTagger(SectionedLexicon::load(path));
}

bool LexiconAdjectiveTagger::is_base(std::string_view w) const { return lexicon_.contains("JJ", w); }

// great+est, nice+st, big+g+est, happ(y->i)+est
bool LexiconAdjectiveTagger::has_stem(std::string_view word, std::string_view suffix) const {
  if (word.size() < suffix.size() + 2 || !word.ends_with(suffix)) return false;
  const std::string stem(word.substr(0, word.size() - suffix.size()));
  if (is_base(stem)) return true;
  if (is_base(stem + "e")) return true;
  const auto n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && is_base(stem.substr(0, n - 1))) return true;
  if (stem.back() == 'i' && is_base(stem.substr(0, n - 1) + "y")) return true;
  return false;
}

AdjectiveSet LexiconAdjectiveTagger::tag(std::string_view s) const {
  if (text::trim(s).empty()) throw Error(ErrorCode::EmptyText, "adjectives of empty text");
  AdjectiveSet out;
  for (auto& tok : word_tokens(s)) {
    if (lexicon_.contains("JJS", tok)) {
      out.items.push_back({tok, AdjTag::JJS});
    } else if (lexicon_.contains("JJR", tok)) {
      out.items.push_back({tok, AdjTag::JJR});
    } else if (is_base(tok)) {
      out.items.push_back({tok, AdjTag::JJ});
    } else if (has_stem(tok, "est")) {
      out.items.push_back({tok, AdjTag::JJS});
    } else if (has_stem(tok, "er")) {
      out.items.push_back({tok, AdjTag::JJR});
    }
  }
  return out;
}

AdjectiveSet adjectives(std::string_view s, const AdjectiveTagger& tagger) {
  if (text::trim(s).empty()) throw Error(ErrorCode::EmptyText, "adjectives of empty text");
  return tagger.tag(s);
}

}  // namespace charprobe::nlpmetrics
