#pragma once

#include <map>
#include <string>
#include <string_view>

#include "charprobe/promptkit/catalog.hpp"

namespace charprobe::promptkit {

enum class PromptKind { EntityPrefix, TweetBool, TweetMcq, TweetGeneral, TweetRecord };

std::string_view to_string(PromptKind k);
PromptKind kind_from_string(std::string_view s);

struct PromptInstance {
  PromptKind kind = PromptKind::EntityPrefix;
  std::string template_id;  // "prefix.<id>" for entity prompts
  std::string rendered;
  std::map<std::string, std::string> slots;  // entity, prefix, tweet, synopsis, question

  // Stable identity used by stores and reports.
  std::string key() const;
};

struct RenderOptions {
  // Off by default: table texts are reproduced verbatim, including the
  // stray space before '?' in some boolean questions.
  bool normalize_question_spacing = false;
};

enum class McqVariant { Inline, Lettered };

PromptInstance render_entity_prompt(const Entity& entity, const PrefixPrompt& prefix);
PromptInstance render_tweet_bool(std::string_view tweet, std::string_view question_id,
                                 const TemplateCatalog& catalog = TemplateCatalog::bundled(),
                                 const RenderOptions& opts = {});
PromptInstance render_tweet_mcq(std::string_view tweet, McqVariant variant,
                                const TemplateCatalog& catalog = TemplateCatalog::bundled());
PromptInstance render_tweet_general(std::string_view tweet, std::string_view question_id,
                                    const TemplateCatalog& catalog = TemplateCatalog::bundled());
PromptInstance render_tweet_record(std::string_view synopsis, std::string_view tweet, std::string_view concept_id,
                                   const TemplateCatalog& catalog = TemplateCatalog::bundled());

// Generic entry point for any catalog template.
PromptInstance render_tweet_template(const TweetTemplate& tmpl, std::string_view tweet, std::string_view synopsis = {},
                                     const RenderOptions& opts = {});

// Recovers slot values from a rendered prompt. Throws InvalidArgument when
// the text does not match the template.
std::map<std::string, std::string> parse_rendered(const TemplateCatalog& catalog, std::string_view template_id,
                                                  std::string_view rendered, const RenderOptions& opts = {});

// Re-renders from slots (inverse of parse_rendered).
std::string rerender(const TemplateCatalog& catalog, std::string_view template_id,
                     const std::map<std::string, std::string>& slots, const RenderOptions& opts = {});

}  // namespace charprobe::promptkit
