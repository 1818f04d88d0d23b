#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

namespace charprobe::corpus {

// Newline-delimited word list; lookups are case-insensitive.
class Dictionary {
 public:
  Dictionary() = default;
  static Dictionary load(const std::filesystem::path& path);
  static Dictionary from_words(std::initializer_list<std::string_view> words);

  void add(std::string_view word);
  bool contains(std::string_view word) const;
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }

 private:
  std::unordered_set<std::string> words_;
};

// "codepoint<TAB>name" per line, codepoint in hex (optionally "U+" prefixed).
// Names are stored lowercase snake_case.
class EmojiMap {
 public:
  EmojiMap() = default;
  static EmojiMap load(const std::filesystem::path& path);

  void add(char32_t cp, std::string name);
  std::optional<std::string_view> name_of(char32_t cp) const;
  std::size_t size() const { return names_.size(); }

 private:
  std::unordered_map<char32_t, std::string> names_;
};

// Characters removed by the punctuation step: Unicode P* minus the kept set.
// Apostrophes flanked by letters/digits on both sides are kept so
// contractions survive ("don't").
struct PunctuationSet {
  std::u32string keep = U":_";
  bool keep_word_internal_apostrophe = true;

  bool removable(char32_t cp) const;
};

// True for tokens of the form ":name:" with name in [a-z0-9_]+.
bool is_emoji_name_token(std::string_view token);

}  // namespace charprobe::corpus
