#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace charprobe::nlpmetrics {

// Word list split into "[section]" blocks; '#' starts a comment line.
// Words are stored lowercase; lookups expect lowercase words.
class SectionedLexicon {
 public:
  static SectionedLexicon load(const std::filesystem::path& path);
  static SectionedLexicon from_text(std::string_view text);

  void add(const std::string& section, std::string_view word);
  bool contains(const std::string& section, std::string_view word) const;
  const std::set<std::string>& section(const std::string& name) const;
  std::vector<std::string> section_names() const;

 private:
  std::map<std::string, std::set<std::string>> sections_;
};

// Lowercased word tokens: runs of letters/digits with internal apostrophes
// or hyphens kept ("don't", "well-known").
std::vector<std::string> word_tokens(std::string_view text);

}  // namespace charprobe::nlpmetrics
