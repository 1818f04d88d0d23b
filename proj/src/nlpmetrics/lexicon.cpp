#include "charprobe/nlpmetrics/lexicon.hpp"

#include "charprobe/common/error.hpp"
#include "charprobe/common/files.hpp"
#include "charprobe/common/text.hpp"

namespace charprobe::nlpmetrics {

SectionedLexicon SectionedLexicon::load(const std::filesystem::path& path) {
  auto lex = from_text(read_file(path));
  if (lex.sections_.empty()) throw Error(ErrorCode::InvalidConfig, "lexicon has no entries: " + path.string());
  return lex;
}

SectionedLexicon SectionedLexicon::from_text(std::string_view body) {
  SectionedLexicon lex;
  std::string current;
  std::size_t pos = 0;
  while (pos <= body.size()) {
    auto nl = body.find('\n', pos);
    if (nl == std::string_view::npos) nl = body.size();
    auto line = text::trim(body.substr(pos, nl - pos));
    pos = nl + 1;
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      current = text::trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    if (current.empty()) throw Error(ErrorCode::MalformedRecord, "lexicon word before any [section]: " + line);
    lex.add(current, line);
  }
  return lex;
}

void SectionedLexicon::add(const std::string& section, std::string_view word) {
  sections_[section].insert(text::to_lower(word));
}

bool SectionedLexicon::contains(const std::string& section, std::string_view word) const {
  auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(std::string(word)) > 0;
}

const std::set<std::string>& SectionedLexicon::section(const std::string& name) const {
  static const std::set<std::string> empty;
  auto it = sections_.find(name);
  return it == sections_.end() ? empty : it->second;
}

std::vector<std::string> SectionedLexicon::section_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : sections_) out.push_back(k);
  return out;
}

namespace {
bool is_word_cp(char32_t cp) { return text::is_alnum(cp) || cp == U'_'; }
bool is_joiner(char32_t cp) { return text::is_apostrophe(cp) || cp == U'-'; }
}  // namespace

std::vector<std::string> word_tokens(std::string_view s) {
  const auto cps = text::decode(text::to_lower(s));
  std::vector<std::string> out;
  std::string cur;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t cp = cps[i];
    if (is_word_cp(cp)) {
      text::append_utf8(cur, cp);
    } else if (is_joiner(cp) && !cur.empty() && i + 1 < cps.size() && is_word_cp(cps[i + 1])) {
      text::append_utf8(cur, cp);
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace charprobe::nlpmetrics
