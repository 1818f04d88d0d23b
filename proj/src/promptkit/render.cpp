#include "charprobe/promptkit/render.hpp"

#include "charprobe/common/digest.hpp"
#include "charprobe/common/error.hpp"
#include "charprobe/common/text.hpp"

namespace charprobe::promptkit {

std::string_view to_string(PromptKind k) {
  switch (k) {
    case PromptKind::EntityPrefix: return "entity_prefix";
    case PromptKind::TweetBool: return "tweet_bool";
    case PromptKind::TweetMcq: return "tweet_mcq";
    case PromptKind::TweetGeneral: return "tweet_general";
    case PromptKind::TweetRecord: return "tweet_record";
  }
  return "entity_prefix";
}

PromptKind kind_from_string(std::string_view s) {
  if (s == "entity_prefix") return PromptKind::EntityPrefix;
  if (s == "tweet_bool") return PromptKind::TweetBool;
  if (s == "tweet_mcq") return PromptKind::TweetMcq;
  if (s == "tweet_general") return PromptKind::TweetGeneral;
  if (s == "tweet_record") return PromptKind::TweetRecord;
  throw Error(ErrorCode::InvalidArgument, "unknown prompt kind '" + std::string(s) + "'");
}

std::string PromptInstance::key() const {
  if (kind == PromptKind::EntityPrefix) return template_id + "|" + slots.at("entity");
  return template_id + "|" + sha256_hex(rendered).substr(0, 16);
}

namespace {

constexpr std::string_view kPrefixTemplatePrefix = "prefix.";

PromptKind kind_for(TemplateFamily f) {
  switch (f) {
    case TemplateFamily::BoolQ: return PromptKind::TweetBool;
    case TemplateFamily::Mcq: return PromptKind::TweetMcq;
    case TemplateFamily::GeneralQ: return PromptKind::TweetGeneral;
    case TemplateFamily::RecordRc: return PromptKind::TweetRecord;
  }
  return PromptKind::TweetBool;
}

std::string apply_options(std::string pattern, const RenderOptions& opts) {
  if (opts.normalize_question_spacing) {
    for (auto pos = pattern.find(" ?"); pos != std::string::npos; pos = pattern.find(" ?", pos)) {
      pattern.erase(pos, 1);
    }
  }
  return pattern;
}

// Splits a pattern at its slot markers: literal, slot, literal, slot, literal...
struct Pieces {
  std::vector<std::string> literals;
  std::vector<std::string> slots;
};

Pieces split_pattern(std::string_view pattern) {
  Pieces p;
  std::string lit;
  std::size_t i = 0;
  while (i < pattern.size()) {
    if (pattern.substr(i, kTweetSlot.size()) == kTweetSlot) {
      p.literals.push_back(std::move(lit));
      lit.clear();
      p.slots.push_back("tweet");
      i += kTweetSlot.size();
    } else if (pattern.substr(i, kSynopsisSlot.size()) == kSynopsisSlot) {
      p.literals.push_back(std::move(lit));
      lit.clear();
      p.slots.push_back("synopsis");
      i += kSynopsisSlot.size();
    } else {
      lit.push_back(pattern[i++]);
    }
  }
  p.literals.push_back(std::move(lit));
  return p;
}

std::string fill(std::string_view pattern, const std::map<std::string, std::string>& slots) {
  const auto pieces = split_pattern(pattern);
  std::string out = pieces.literals[0];
  for (std::size_t i = 0; i < pieces.slots.size(); ++i) {
    out += slots.at(pieces.slots[i]);
    out += pieces.literals[i + 1];
  }
  return out;
}

void require_tweet(std::string_view tweet) {
  if (text::trim(tweet).empty()) throw Error(ErrorCode::EmptyTweet, "tweet text is empty");
}

}  // namespace

PromptInstance render_entity_prompt(const Entity& entity, const PrefixPrompt& prefix) {
  if (entity.name.empty() || text::trim(entity.name) != entity.name) {
    throw Error(ErrorCode::InvalidArgument, "entity name must be non-empty without surrounding whitespace");
  }
  if (prefix.text.empty()) throw Error(ErrorCode::InvalidArgument, "empty prefix-prompt");
  PromptInstance p;
  p.kind = PromptKind::EntityPrefix;
  p.template_id = std::string(kPrefixTemplatePrefix) + prefix.id;
  p.rendered = entity.name + " " + prefix.text;
  p.slots = {{"entity", entity.name}, {"prefix", prefix.text}};
  return p;
}

PromptInstance render_tweet_template(const TweetTemplate& tmpl, std::string_view tweet, std::string_view synopsis,
                                     const RenderOptions& opts) {
  require_tweet(tweet);
  PromptInstance p;
  p.kind = kind_for(tmpl.family);
  p.template_id = tmpl.id;
  p.slots["tweet"] = std::string(tweet);
  p.slots["question"] = tmpl.question_id();
  const auto pattern = apply_options(tmpl.pattern, opts);
  if (tmpl.family == TemplateFamily::RecordRc) {
    if (text::trim(synopsis).empty()) throw Error(ErrorCode::EmptySynopsis, "synopsis is empty");
    const auto pieces = split_pattern(pattern);
    // The separator after the synopsis must be unambiguous for parsing.
    if (synopsis.find(pieces.literals[1]) != std::string_view::npos) {
      throw Error(ErrorCode::InvalidArgument, "synopsis contains the question separator");
    }
    p.slots["synopsis"] = std::string(synopsis);
  }
  p.rendered = fill(pattern, p.slots);
  return p;
}

PromptInstance render_tweet_bool(std::string_view tweet, std::string_view question_id, const TemplateCatalog& catalog,
                                 const RenderOptions& opts) {
  const auto& tmpl = catalog.tweet_template(TemplateFamily::BoolQ, question_id);
  return render_tweet_template(tmpl, tweet, {}, opts);
}

PromptInstance render_tweet_mcq(std::string_view tweet, McqVariant variant, const TemplateCatalog& catalog) {
  const auto& tmpl = catalog.tweet_template(TemplateFamily::Mcq, variant == McqVariant::Inline ? "inline" : "lettered");
  return render_tweet_template(tmpl, tweet);
}

PromptInstance render_tweet_general(std::string_view tweet, std::string_view question_id,
                                    const TemplateCatalog& catalog) {
  require_tweet(tweet);
  const auto& tmpl = catalog.tweet_template(TemplateFamily::GeneralQ, question_id);
  return render_tweet_template(tmpl, tweet);
}

PromptInstance render_tweet_record(std::string_view synopsis, std::string_view tweet, std::string_view concept_id,
                                   const TemplateCatalog& catalog) {
  require_tweet(tweet);
  if (text::trim(synopsis).empty()) throw Error(ErrorCode::EmptySynopsis, "synopsis is empty");
  const auto& tmpl = catalog.tweet_template(TemplateFamily::RecordRc, concept_id);
  return render_tweet_template(tmpl, tweet, synopsis);
}

std::map<std::string, std::string> parse_rendered(const TemplateCatalog& catalog, std::string_view template_id,
                                                  std::string_view rendered, const RenderOptions& opts) {
  auto mismatch = [&] {
    return Error(ErrorCode::InvalidArgument, "text does not match template '" + std::string(template_id) + "'");
  };
  if (template_id.substr(0, kPrefixTemplatePrefix.size()) == kPrefixTemplatePrefix) {
    const auto& prefix = catalog.prefix(template_id.substr(kPrefixTemplatePrefix.size()));
    const std::string suffix = " " + prefix.text;
    if (rendered.size() <= suffix.size() || rendered.substr(rendered.size() - suffix.size()) != suffix) throw mismatch();
    return {{"entity", std::string(rendered.substr(0, rendered.size() - suffix.size()))}, {"prefix", prefix.text}};
  }

  const auto& tmpl = catalog.tweet_template(template_id);
  const auto pieces = split_pattern(apply_options(tmpl.pattern, opts));
  const auto& head = pieces.literals.front();
  const auto& tail = pieces.literals.back();
  if (rendered.size() < head.size() + tail.size() || rendered.substr(0, head.size()) != head ||
      rendered.substr(rendered.size() - tail.size()) != tail) {
    throw mismatch();
  }
  std::string_view body = rendered.substr(head.size(), rendered.size() - head.size() - tail.size());
  std::map<std::string, std::string> slots;
  // Inner separators are matched at their first occurrence; render rejects
  // synopses containing them, and the tweet is always the last slot.
  for (std::size_t i = 0; i + 1 < pieces.slots.size(); ++i) {
    const auto& sep = pieces.literals[i + 1];
    auto pos = body.find(sep);
    if (pos == std::string_view::npos) throw mismatch();
    slots[pieces.slots[i]] = std::string(body.substr(0, pos));
    body.remove_prefix(pos + sep.size());
  }
  slots[pieces.slots.back()] = std::string(body);
  slots["question"] = tmpl.question_id();
  return slots;
}

std::string rerender(const TemplateCatalog& catalog, std::string_view template_id,
                     const std::map<std::string, std::string>& slots, const RenderOptions& opts) {
  if (template_id.substr(0, kPrefixTemplatePrefix.size()) == kPrefixTemplatePrefix) {
    const auto& prefix = catalog.prefix(template_id.substr(kPrefixTemplatePrefix.size()));
    return render_entity_prompt({slots.at("entity"), ""}, prefix).rendered;
  }
  const auto& tmpl = catalog.tweet_template(template_id);
  auto it = slots.find("synopsis");
  return render_tweet_template(tmpl, slots.at("tweet"), it == slots.end() ? std::string_view{} : it->second, opts)
      .rendered;
}

}  // namespace charprobe::promptkit
