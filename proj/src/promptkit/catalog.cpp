#include "charprobe/promptkit/catalog.hpp"

#include <algorithm>

#include "charprobe/common/digest.hpp"
#include "charprobe/common/error.hpp"
#include "charprobe/common/files.hpp"

namespace charprobe::promptkit {

std::string_view to_string(TemplateFamily f) {
  switch (f) {
    case TemplateFamily::BoolQ: return "bool_q";
    case TemplateFamily::Mcq: return "mcq";
    case TemplateFamily::GeneralQ: return "general_q";
    case TemplateFamily::RecordRc: return "record_rc";
  }
  return "bool_q";
}

TemplateFamily family_from_string(std::string_view s) {
  if (s == "bool_q") return TemplateFamily::BoolQ;
  if (s == "mcq") return TemplateFamily::Mcq;
  if (s == "general_q") return TemplateFamily::GeneralQ;
  if (s == "record_rc") return TemplateFamily::RecordRc;
  throw Error(ErrorCode::UnknownTemplate, "unknown template family '" + std::string(s) + "'");
}

std::string TweetTemplate::question_id() const {
  auto dot = id.find('.');
  return dot == std::string::npos ? id : id.substr(dot + 1);
}

namespace {

std::size_t count_of(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string_view::npos; pos = hay.find(needle, pos + needle.size())) ++n;
  return n;
}

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

TemplateCatalog make_bundled() {
  const std::string_view kBundled = R"json({
  "prefixes": [
    {"id": "is_a_very", "text": "is a very"},
    {"id": "is_known_as", "text": "is known as"},
    {"id": "can_be_described_as_a", "text": "can be described as a"},
    {"id": "is_regarded_as_a", "text": "is regarded as a"},
    {"id": "lacks", "text": "lacks"},
    {"id": "is_called_the", "text": "is called the"},
    {"id": "probably_is_a", "text": "probably is a"},
    {"id": "can_be_inferred_as_a", "text": "can be inferred as a"}
  ],
  "templates": [
    {"id": "bool_q.advocacy", "family": "bool_q", "pattern": "{tweet}. Q: Is it true that preceding sentence advocates a cause? A:"},
    {"id": "bool_q.hyper_advocacy", "family": "bool_q", "pattern": "{tweet}. Q: Is it true that preceding sentence hyper-advocates a cause ? A:"},
    {"id": "bool_q.disinformation", "family": "bool_q", "pattern": "{tweet}. Q: Is it true that preceding sentence is a disinformation ? A:"},
    {"id": "bool_q.propaganda", "family": "bool_q", "pattern": "{tweet}. Q: Is it true that preceding sentence is a about a propaganda ? A:"},
    {"id": "bool_q.favors", "family": "bool_q", "pattern": "{tweet}. Q: Is it true that preceding sentence favors a cause ? A:"},
    {"id": "bool_q.against", "family": "bool_q", "pattern": "{tweet}. Q: Is it true that preceding sentence is against a cause? A:"},
    {"id": "bool_q.advocating_statement", "family": "bool_q", "pattern": "{tweet}. Q: The preceding statement is advocating a cause. True or False? A:"},
    {"id": "mcq.inline", "family": "mcq", "pattern": "{tweet}. Q: Can the preceding sentence be classified as one of the following: information, rhetoric, advocacy, hyper-advocacy, dogma, or propaganda? A:"},
    {"id": "mcq.lettered", "family": "mcq", "pattern": "{tweet}. Classify the preceding sentence as one of the following:\nA) information\nB) disinformation\nC) advocacy\nD) hyper-advocacy\nE) propaganda\nF) none of the above\n"},
    {"id": "general_q.cta", "family": "general_q", "pattern": "{tweet}. Q: For what cause is the above Tweet CTA? A:"},
    {"id": "general_q.call_to_action", "family": "general_q", "pattern": "{tweet}. Q: For what cause is the above Tweet call-to-action? A:"},
    {"id": "general_q.dogmatic_content", "family": "general_q", "pattern": "{tweet}. Q: Do you find the above Tweet as having dogmatic content? A:"},
    {"id": "general_q.rhetoric_content", "family": "general_q", "pattern": "{tweet}. Q: Do you find the above Tweet as having rhetoric content? A:"},
    {"id": "general_q.cause_protest_cta", "family": "general_q", "pattern": "{tweet}. Q: Is the Tweet call to action for a cause/protest? A:"},
    {"id": "general_q.dominant_emotion", "family": "general_q", "pattern": "{tweet}. Q: What is the dominant emotion in the above Tweet? A:"},
    {"id": "general_q.sentiment", "family": "general_q", "pattern": "{tweet}. Q: What is the sentiment of the above Tweet? A:"},
    {"id": "general_q.propaganda", "family": "general_q", "pattern": "{tweet}. Q: Is the above Tweet a propaganda? A:"},
    {"id": "record_rc.dogmatism", "family": "record_rc", "pattern": "{synopsis}\nQuestion: John says \"{tweet}\". Does John's saying contain dogmatic content?"},
    {"id": "record_rc.eml", "family": "record_rc", "pattern": "{synopsis}\nQuestion: John says \"{tweet}\". Does John's saying contain Emotionally Manipulative Language?"},
    {"id": "record_rc.emotion", "family": "record_rc", "pattern": "{synopsis}\nQuestion: Jhon says \"{tweet}\". Does Jhon's saying contain Aggressive/Optimism/Love/Submission/Fear/Surprise/Sadness/Disgust emotion?"},
    {"id": "record_rc.cta", "family": "record_rc", "pattern": "{synopsis}\nQuestion: John says \"{tweet}\". Can John's saying be classified as Call-To-Action?"}
  ]
})json";
  return TemplateCatalog::from_json_text(kBundled);
}

}  // namespace

const TemplateCatalog& TemplateCatalog::bundled() {
  static const TemplateCatalog catalog = make_bundled();
  return catalog;
}

TemplateCatalog TemplateCatalog::load(const std::filesystem::path& path) { return from_json_text(read_file(path)); }

TemplateCatalog TemplateCatalog::from_json_text(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("template catalog: ") + e.what());
  }
  TemplateCatalog c;
  for (const auto& p : j.value("prefixes", json::array())) {
    PrefixPrompt prefix{p.at("id").get<std::string>(), p.at("text").get<std::string>()};
    if (prefix.id.empty() || prefix.text.empty()) throw Error(ErrorCode::InvalidConfig, "prefix with empty id/text");
    if (c.prefix_index(prefix.id)) throw Error(ErrorCode::InvalidConfig, "duplicate prefix id " + prefix.id);
    c.prefixes_.push_back(std::move(prefix));
  }
  for (const auto& t : j.value("templates", json::array())) {
    c.add_template({t.at("id").get<std::string>(), family_from_string(t.at("family").get<std::string>()),
                    t.at("pattern").get<std::string>()});
  }
  return c;
}

void TemplateCatalog::add_template(TweetTemplate t) {
  if (t.family == TemplateFamily::RecordRc) {
    // The speaker is always "John"; the misspelling in one source row is a typo.
    replace_all(t.pattern, "Jhon", "John");
  }
  const std::string family_prefix = std::string(to_string(t.family)) + ".";
  if (t.id.rfind(family_prefix, 0) != 0 || t.id.size() == family_prefix.size()) {
    throw Error(ErrorCode::InvalidConfig, "template id '" + t.id + "' must start with '" + family_prefix + "'");
  }
  const bool needs_synopsis = t.family == TemplateFamily::RecordRc;
  if (count_of(t.pattern, kTweetSlot) != 1) {
    throw Error(ErrorCode::InvalidConfig, "template '" + t.id + "' must contain {tweet} exactly once");
  }
  if (count_of(t.pattern, kSynopsisSlot) != (needs_synopsis ? 1u : 0u)) {
    throw Error(ErrorCode::InvalidConfig, "template '" + t.id + "' has the wrong number of {synopsis} slots");
  }
  if (needs_synopsis && t.pattern.find(kSynopsisSlot) > t.pattern.find(kTweetSlot)) {
    throw Error(ErrorCode::InvalidConfig, "template '" + t.id + "': {synopsis} must precede {tweet}");
  }
  for (const auto& existing : templates_) {
    if (existing.id == t.id) throw Error(ErrorCode::InvalidConfig, "duplicate template id " + t.id);
  }
  templates_.push_back(std::move(t));
}

const PrefixPrompt& TemplateCatalog::prefix(std::string_view id) const {
  auto idx = prefix_index(id);
  if (!idx) throw Error(ErrorCode::UnknownTemplate, "unknown prefix id '" + std::string(id) + "'");
  return prefixes_[*idx];
}

std::optional<std::size_t> TemplateCatalog::prefix_index(std::string_view id) const {
  for (std::size_t i = 0; i < prefixes_.size(); ++i) {
    if (prefixes_[i].id == id) return i;
  }
  return std::nullopt;
}

const TweetTemplate& TemplateCatalog::tweet_template(std::string_view id) const {
  for (const auto& t : templates_) {
    if (t.id == id) return t;
  }
  throw Error(ErrorCode::UnknownTemplate, "unknown template id '" + std::string(id) + "'");
}

const TweetTemplate& TemplateCatalog::tweet_template(TemplateFamily family, std::string_view question_id) const {
  const std::string id = std::string(to_string(family)) + "." + std::string(question_id);
  for (const auto& t : templates_) {
    if (t.id == id) return t;
  }
  throw Error(ErrorCode::UnknownQuestion, "unknown question '" + std::string(question_id) + "' for family " +
                                              std::string(to_string(family)));
}

std::string TemplateCatalog::to_json_text() const {
  json j;
  j["prefixes"] = json::array();
  for (const auto& p : prefixes_) j["prefixes"].push_back({{"id", p.id}, {"text", p.text}});
  j["templates"] = json::array();
  for (const auto& t : templates_) {
    j["templates"].push_back({{"id", t.id}, {"family", std::string(to_string(t.family))}, {"pattern", t.pattern}});
  }
  return j.dump(2) + "\n";
}

std::string TemplateCatalog::hash() const { return sha256_hex(to_json_text()); }

}  // namespace charprobe::promptkit
