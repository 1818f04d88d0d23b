#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace charprobe::promptkit {

struct PrefixPrompt {
  std::string id;
  std::string text;
};

struct Entity {
  std::string name;
  std::string source_tag;
};

enum class TemplateFamily { BoolQ, Mcq, GeneralQ, RecordRc };

std::string_view to_string(TemplateFamily f);
TemplateFamily family_from_string(std::string_view s);

// Patterns use {tweet} and {synopsis} markers.
struct TweetTemplate {
  std::string id;  // "<family>.<question_id>"
  TemplateFamily family = TemplateFamily::BoolQ;
  std::string pattern;

  std::string question_id() const;
};

inline constexpr std::string_view kTweetSlot = "{tweet}";
inline constexpr std::string_view kSynopsisSlot = "{synopsis}";

// The prompt set used by a run: entity prefix-prompts plus tweet templates.
class TemplateCatalog {
 public:
  // The eight designed prefix-prompts and the four tweet template families.
  static const TemplateCatalog& bundled();
  static TemplateCatalog load(const std::filesystem::path& path);
  static TemplateCatalog from_json_text(std::string_view text);

  const std::vector<PrefixPrompt>& prefixes() const { return prefixes_; }
  const std::vector<TweetTemplate>& templates() const { return templates_; }

  const PrefixPrompt& prefix(std::string_view id) const;
  const TweetTemplate& tweet_template(std::string_view id) const;
  const TweetTemplate& tweet_template(TemplateFamily family, std::string_view question_id) const;
  std::optional<std::size_t> prefix_index(std::string_view id) const;

  // Canonical serialization; hashed into run manifests.
  std::string to_json_text() const;
  std::string hash() const;

 private:
  void add_template(TweetTemplate t);
  std::vector<PrefixPrompt> prefixes_;
  std::vector<TweetTemplate> templates_;
};

}  // namespace charprobe::promptkit
