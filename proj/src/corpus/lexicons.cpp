#include "charprobe/corpus/lexicons.hpp"

#include "charprobe/common/error.hpp"
#include "charprobe/common/files.hpp"
#include "charprobe/common/text.hpp"

namespace charprobe::corpus {

Dictionary Dictionary::load(const std::filesystem::path& path) {
  Dictionary d;
  for (const auto& line : read_lines(path)) {
    auto w = text::trim(line);
    if (w.empty() || w[0] == '#') continue;
    d.add(w);
  }
  if (d.empty()) throw Error(ErrorCode::InvalidConfig, "dictionary is empty: " + path.string());
  return d;
}

Dictionary Dictionary::from_words(std::initializer_list<std::string_view> words) {
  Dictionary d;
  for (auto w : words) d.add(w);
  return d;
}

void Dictionary::add(std::string_view word) { words_.insert(text::to_lower(word)); }

bool Dictionary::contains(std::string_view word) const {
  if (words_.count(std::string(word))) return true;
  return words_.count(text::to_lower(word)) > 0;
}

EmojiMap EmojiMap::load(const std::filesystem::path& path) {
  EmojiMap m;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(path)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::MalformedRecord, path.string() + ":" + std::to_string(line_no) + ": missing tab");
    }
    std::string hex = line.substr(0, tab);
    if (hex.rfind("U+", 0) == 0 || hex.rfind("u+", 0) == 0) hex = hex.substr(2);
    char32_t cp = 0;
    try {
      cp = static_cast<char32_t>(std::stoul(hex, nullptr, 16));
    } catch (const std::exception&) {
      throw Error(ErrorCode::MalformedRecord, path.string() + ":" + std::to_string(line_no) + ": bad codepoint");
    }
    m.add(cp, text::trim(line.substr(tab + 1)));
  }
  return m;
}

void EmojiMap::add(char32_t cp, std::string name) {
  std::string norm;
  bool pending_sep = false;
  for (char c : text::to_lower(name)) {
    bool word = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    if (word) {
      if (pending_sep && !norm.empty()) norm.push_back('_');
      pending_sep = false;
      norm.push_back(c);
    } else {
      pending_sep = true;
    }
  }
  if (!norm.empty()) names_[cp] = std::move(norm);
}

std::optional<std::string_view> EmojiMap::name_of(char32_t cp) const {
  auto it = names_.find(cp);
  if (it == names_.end()) return std::nullopt;
  return std::string_view(it->second);
}

bool PunctuationSet::removable(char32_t cp) const {
  return text::is_punctuation(cp) && keep.find(cp) == std::u32string::npos;
}

bool is_emoji_name_token(std::string_view token) {
  if (token.size() < 3 || token.front() != ':' || token.back() != ':') return false;
  for (char c : token.substr(1, token.size() - 2)) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

}  // namespace charprobe::corpus
