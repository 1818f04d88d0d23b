#include <doctest.h>

#include <random>

#include "charprobe/common/error.hpp"
#include "charprobe/promptkit/catalog.hpp"
#include "charprobe/promptkit/render.hpp"
#include "support/support.hpp"

using namespace charprobe;
using namespace charprobe::promptkit;
namespace ts = testsupport;

namespace {

const nlohmann::json& golden() {
  static const auto g = nlohmann::json::parse(ts::slurp(ts::fixtures() / "prompts/golden.json"));
  return g;
}

std::string random_tweet(std::mt19937_64& rng) {
  static const std::string alphabet =
      "abcdefghijklmnopqrstuvwxyz ABCXYZ0123456789.,!?'\":;()-#@/\\\n\t" "\xc3\xa9";
  std::uniform_int_distribution<std::size_t> len(1, 80), pick(0, alphabet.size() - 2);
  std::string s;
  const auto n = len(rng);
  for (std::size_t i = 0; i < n; ++i) s.push_back(alphabet[pick(rng)]);
  // Avoid splitting the two-byte character; keep the string valid UTF-8.
  std::string out;
  for (char c : s) {
    if (c == '\xc3') out += "\xc3\xa9";
    else if (c != '\xa9') out.push_back(c);
  }
  if (out.find_first_not_of(" \n\t") == std::string::npos) out = "x" + out;
  return out;
}

}  // namespace

TEST_CASE("the eight prefix-prompts render to golden strings") {
  const auto& cat = TemplateCatalog::bundled();
  const auto& g = golden()["prefix"];
  REQUIRE(cat.prefixes().size() == 8);
  std::vector<std::string> ids;
  for (const auto& p : cat.prefixes()) {
    ids.push_back(p.id);
    const auto inst = render_entity_prompt({golden()["entity"].get<std::string>(), ""}, p);
    CHECK(inst.rendered == g.at(p.id).get<std::string>());
    CHECK(inst.kind == PromptKind::EntityPrefix);
    CHECK(inst.template_id == "prefix." + p.id);
    CHECK(inst.key() == "prefix." + p.id + "|Jane");
  }
  CHECK(ids == std::vector<std::string>{"is_a_very", "is_known_as", "can_be_described_as_a", "is_regarded_as_a",
                                        "lacks", "is_called_the", "probably_is_a", "can_be_inferred_as_a"});
}

TEST_CASE("every tweet template renders to its golden string") {
  const auto& cat = TemplateCatalog::bundled();
  const auto& g = golden()["templates"];
  CHECK(cat.templates().size() == g.size());
  for (const auto& [id, expected] : g.items()) {
    INFO("template " << id);
    const auto& t = cat.tweet_template(id);
    const auto inst = render_tweet_template(t, "TWEET", "SYNOPSIS");
    CHECK(inst.rendered == expected.get<std::string>());
  }
}

TEST_CASE("family-specific render entry points") {
  CHECK(render_tweet_bool("T", "advocacy").rendered ==
        "T. Q: Is it true that preceding sentence advocates a cause? A:");
  CHECK(render_tweet_bool("T", "favors", TemplateCatalog::bundled(), {.normalize_question_spacing = true}).rendered ==
        "T. Q: Is it true that preceding sentence favors a cause? A:");
  CHECK(render_tweet_mcq("T", McqVariant::Lettered).kind == PromptKind::TweetMcq);
  CHECK(render_tweet_general("T", "sentiment").kind == PromptKind::TweetGeneral);
  const auto rc = render_tweet_record("S", "T", "cta");
  CHECK(rc.kind == PromptKind::TweetRecord);
  CHECK(rc.slots.at("synopsis") == "S");
  CHECK(rc.slots.at("question") == "cta");
}

TEST_CASE("render errors") {
  CHECK_THROWS_AS(render_tweet_bool("  ", "advocacy"), Error);
  CHECK_THROWS_AS(render_tweet_bool("t", "no_such_question"), Error);
  CHECK_THROWS_AS(render_tweet_record("", "t", "cta"), Error);
  CHECK_THROWS_AS(render_tweet_record("a\nQuestion: John says \"", "t", "cta"), Error);
  CHECK_THROWS_AS(render_entity_prompt({"", ""}, TemplateCatalog::bundled().prefix("lacks")), Error);
  CHECK_THROWS_AS(render_entity_prompt({" Jane", ""}, TemplateCatalog::bundled().prefix("lacks")), Error);
  CHECK_THROWS_AS(TemplateCatalog::bundled().prefix("nope"), Error);
  try {
    render_tweet_bool("", "advocacy");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyTweet);
  }
}

TEST_CASE("slot round trip over 1000 random tweets and every template") {
  const auto& cat = TemplateCatalog::bundled();
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000; ++i) {
    const auto tweet = random_tweet(rng);
    const auto& t = cat.templates()[static_cast<std::size_t>(i) % cat.templates().size()];
    const auto inst = render_tweet_template(t, tweet, "A synopsis.");
    const auto slots = parse_rendered(cat, t.id, inst.rendered);
    INFO("template " << t.id << " tweet " << tweet);
    CHECK(slots.at("tweet") == tweet);
    CHECK(rerender(cat, t.id, slots) == inst.rendered);
  }
  const auto e = render_entity_prompt({"Jane Doe", ""}, cat.prefix("lacks"));
  CHECK(parse_rendered(cat, e.template_id, e.rendered).at("entity") == "Jane Doe");
  CHECK(rerender(cat, e.template_id, e.slots) == e.rendered);
  CHECK_THROWS_AS(parse_rendered(cat, "bool_q.advocacy", "unrelated text"), Error);
}

TEST_CASE("catalog serialization is canonical and matches the shipped copy") {
  const auto& cat = TemplateCatalog::bundled();
  const auto text = cat.to_json_text();
  const auto again = TemplateCatalog::from_json_text(text);
  CHECK(again.to_json_text() == text);
  CHECK(again.hash() == cat.hash());
  CHECK(ts::slurp(ts::data_dir() / "templates.json") == text);
  CHECK_THROWS_AS(TemplateCatalog::from_json_text("{"), Error);
  CHECK_THROWS_AS(TemplateCatalog::from_json_text(R"({"prefixes":[],"templates":[{"id":"bool_q.x","family":"bool_q","pattern":"no slot"}]})"),
                  Error);
}

TEST_CASE("prompt kinds and families round trip through strings") {
  for (auto k : {PromptKind::EntityPrefix, PromptKind::TweetBool, PromptKind::TweetMcq, PromptKind::TweetGeneral,
                 PromptKind::TweetRecord}) {
    CHECK(kind_from_string(to_string(k)) == k);
  }
  for (auto f : {TemplateFamily::BoolQ, TemplateFamily::Mcq, TemplateFamily::GeneralQ, TemplateFamily::RecordRc}) {
    CHECK(family_from_string(to_string(f)) == f);
  }
}
