#include <doctest.h>

#include <random>
#include <set>

#include "charprobe/common/error.hpp"
#include "charprobe/common/text.hpp"
#include "charprobe/corpus/clean.hpp"
#include "charprobe/corpus/ingest.hpp"
#include "support/support.hpp"

using namespace charprobe;
using namespace charprobe::corpus;
namespace ts = testsupport;

namespace {

const EmojiMap& emoji() {
  static const EmojiMap m = EmojiMap::load(ts::data_dir() / "emoji.tsv");
  return m;
}

const Dictionary& dictionary() {
  static const Dictionary d = Dictionary::load(ts::data_dir() / "english_words.txt");
  return d;
}

std::string clean(std::string_view s) { return clean_tweet(s, emoji(), PunctuationSet{}); }

// Random tweets mixing words, mentions, hashtags, URLs, emoji, punctuation,
// case and whitespace.
std::string random_tweet(std::mt19937_64& rng) {
  static const std::vector<std::string> parts = {
      "Hello", "WORLD", "vote", "Don't", "it's", "rock'n'roll", "@user", "@Mayor_Bob:", "#Tag", "#a1",
      "https://t.co/x", "www.Site.org", "HTTP://A.B", "\xf0\x9f\x98\x80", "\xe2\x9d\xa4\xef\xb8\x8f",
      "\xf0\x9f\x94\xa5\xf0\x9f\x94\xa5", "\xf0\x9f\xab\xa0", "!!!", "...", "(x)", "\"q\"", "'s'", "a-b", "snake_case",
      ":", "::", ":fire:", "$5.99", "\xe2\x80\x94", "caf\xc3\xa9", "NA\xc3\x8f" "VE", "x@y", "-#z", "''", "'",
      "a'", "'b", "\xe2\x80\x99quoted\xe2\x80\x99", "don\xe2\x80\x99t", "100%", "e.g.", "1,000"};
  static const std::vector<std::string> spaces = {" ", "  ", "\t", "\n", ""};
  std::uniform_int_distribution<std::size_t> n_parts(0, 12), pick(0, parts.size() - 1), sp(0, spaces.size() - 1);
  std::string out;
  const auto n = n_parts(rng);
  for (std::size_t i = 0; i < n; ++i) out += parts[pick(rng)] + spaces[sp(rng)];
  return out;
}

}  // namespace

TEST_CASE("cleaning fixture: 20 hand-cleaned tweets") {
  const auto cases = ts::read_jsonl(ts::fixtures() / "cleaning/cases.jsonl");
  REQUIRE(cases.size() == 20);
  for (const auto& c : cases) {
    const auto raw = c.at("raw").get<std::string>();
    INFO("raw: " << raw);
    CHECK(clean(raw) == c.at("expected").get<std::string>());
  }
}

TEST_CASE("cleaning is idempotent on 1000 random tweets") {
  std::mt19937_64 rng(20240501);
  for (int i = 0; i < 1000; ++i) {
    const auto raw = random_tweet(rng);
    const auto once = clean(raw);
    INFO("raw: " << raw);
    CHECK(clean(once) == once);
    CHECK(once == text::collapse_whitespace(once));
    CHECK(once == text::to_lower(once));
  }
}

TEST_CASE("cleaning step details") {
  SUBCASE("url tokens") {
    CHECK(is_url_token("https://x.y"));
    CHECK(is_url_token("WWW.x.org"));
    CHECK(is_url_token("ftp://a"));
    CHECK_FALSE(is_url_token("wwwx"));
  }
  SUBCASE("unmapped emoji are dropped and variation selectors vanish") {
    CHECK(clean("ok \xf0\x9f\xab\xa0 fine") == "ok fine");
    CHECK(clean("\xe2\x9d\xa4\xef\xb8\x8f") == ":heavy_black_heart:");
  }
  SUBCASE("underscore and colon survive") { CHECK(clean("a_b: c") == "a_b: c"); }
  SUBCASE("word-internal apostrophes only") {
    CHECK(clean("'tis rock'n'roll'") == "tis rock'n'roll");
    CHECK(clean("don\xe2\x80\x99t") == "don\xe2\x80\x99t");
  }
  SUBCASE("the punctuation set can be widened") {
    PunctuationSet strict;
    strict.keep = U"";
    strict.keep_word_internal_apostrophe = false;
    CHECK(clean_tweet("a_b: don't", emoji(), strict) == "ab dont");
  }
  CHECK(clean("") == "");
  CHECK(is_emoji_name_token(":fire:"));
  CHECK_FALSE(is_emoji_name_token("::"));
  CHECK_FALSE(is_emoji_name_token(":Fire:"));
}

TEST_CASE("english ratio: strict boundary at 0.70") {
  const auto dict = Dictionary::from_words({"a", "b", "c", "d", "e", "f", "g"});
  // 7 of 10 tokens known: ratio exactly 0.70, rejected.
  const std::string at = "a b c d e f g x y z";
  CHECK(english_ratio(at, dict) == doctest::Approx(0.70));
  std::vector<RawTweet> raws = {{"1", at, ""}, {"2", "a b c d e f g a x y", ""}, {"3", "@only", ""}};
  const auto r = filter_tweets(raws, {emoji(), PunctuationSet{}, dict}, 0.70);
  REQUIRE(r.kept.size() == 1);
  CHECK(r.kept[0].id == "2");
  CHECK(r.kept[0].english_ratio == doctest::Approx(0.8));
  CHECK(r.rejected.ratio == 1);
  CHECK(r.rejected.empty == 1);
  CHECK(r.rejected.total() == 2);
  CHECK_THROWS_AS(filter_tweets(raws, {emoji(), PunctuationSet{}, dict}, 1.01), Error);
}

TEST_CASE("english ratio ignores emoji-name tokens and throws on nothing to judge") {
  const auto dict = Dictionary::from_words({"fire"});
  CHECK(english_ratio("fire :fire: zz", dict) == doctest::Approx(0.5));
  CHECK_THROWS_AS(english_ratio(":fire: :fire:", dict), Error);
  CHECK_THROWS_AS(english_ratio("   ", dict), Error);
}

TEST_CASE("english ratio matches a hand-rolled membership counter on 500 random mixes") {
  const std::vector<std::string> known = {"the", "cat", "sat", "on", "mat", "vote", "now"};
  const std::vector<std::string> unknown = {"qzx", "blorf", "snarg", "vvv"};
  const std::vector<std::string> names = {":fire:", ":grinning_face:"};
  Dictionary dict;
  for (const auto& w : known) dict.add(w);
  const std::set<std::string> known_set(known.begin(), known.end());
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> toks;
    const int n = 1 + static_cast<int>(rng() % 15);
    for (int t = 0; t < n; ++t) {
      const auto r = rng() % 10;
      if (r < 5) toks.push_back(known[rng() % known.size()]);
      else if (r < 9) toks.push_back(unknown[rng() % unknown.size()]);
      else toks.push_back(names[rng() % names.size()]);
    }
    std::size_t words = 0, hits = 0;
    for (const auto& t : toks) {
      if (t.front() == ':') continue;
      ++words;
      hits += known_set.count(t);
    }
    const auto joined = text::join(toks, " ");
    if (words == 0) {
      CHECK_THROWS_AS(english_ratio(joined, dict), Error);
      continue;
    }
    CHECK(english_ratio(joined, dict) == static_cast<double>(hits) / static_cast<double>(words));
  }
}

TEST_CASE("lexicon loading") {
  ts::TempDir dir;
  ts::spit(dir / "words.txt", "Apple\n\nbanana\r\n");
  const auto d = Dictionary::load(dir / "words.txt");
  CHECK(d.size() == 2);
  CHECK(d.contains("APPLE"));
  CHECK(d.contains("banana"));
  ts::spit(dir / "emoji.tsv", "U+1F600\tGrinning Face\n1f525\tfire\n");
  const auto m = EmojiMap::load(dir / "emoji.tsv");
  CHECK(m.name_of(0x1F600) == "grinning_face");
  CHECK(m.name_of(0x1F525) == "fire");
  CHECK_FALSE(m.name_of(0x1F4A9).has_value());
  CHECK_THROWS_AS(Dictionary::load(dir / "missing.txt"), Error);
  CHECK(dictionary().contains("the"));
}

TEST_CASE("tweet reading skips bad records and duplicate ids") {
  ts::TempDir dir;
  ts::spit(dir / "t.jsonl",
           "{\"id\":\"1\",\"text\":\"hi there\",\"corpus_tag\":\"x\"}\n"
           "{\"id\":\"1\",\"text\":\"dup\"}\n"
           "not json\n"
           "{\"id\":\"2\",\"text\":\"bad \xc3\"}\n"
           "{\"id\":\"3\",\"text\":\"ok\"}\n");
  const auto r = read_tweets(dir / "t.jsonl");
  REQUIRE(r.items.size() == 2);
  CHECK(r.items[0].corpus_tag == "x");
  CHECK(r.items[1].id == "3");
  CHECK(r.skipped == 3);
  CHECK(r.diagnostics.size() == 3);
  CHECK_THROWS_AS(read_tweets(dir / "none.jsonl"), Error);
}

TEST_CASE("article ingestion: directory of text files and jsonl") {
  ts::TempDir dir;
  ts::spit(dir / "a/b.txt", "Second article.\n");
  ts::spit(dir / "a/a.txt", "First article.\n");
  ts::spit(dir / "a/empty.txt", "  \n");
  auto r = ingest_articles(dir / "a", "house1");
  REQUIRE(r.items.size() == 2);
  CHECK(r.items[0].text.find("First") != std::string::npos);
  CHECK(r.items[0].media_house == "house1");
  CHECK(r.skipped == 1);
  ts::spit(dir / "x.jsonl",
           "{\"id\":\"a1\",\"media_house\":\"house1\",\"url\":\"http://x\",\"text\":\"Body.\"}\n"
           "{\"id\":\"a2\",\"media_house\":\"other\",\"text\":\"Elsewhere.\"}\n");
  r = ingest_articles(dir / "x.jsonl", "house1");
  REQUIRE(r.items.size() == 1);
  CHECK(r.items[0].url == "http://x");
  CHECK(r.skipped == 1);
}

TEST_CASE("cleaned corpus serialization") {
  const std::vector<CleanTweet> t = {{"1", "hello world", 1.0, "x"}};
  const auto line = nlohmann::json::parse(clean_corpus_jsonl(t));
  CHECK(line["id"] == "1");
  CHECK(line["text"] == "hello world");
  CHECK(line["english_ratio"] == 1.0);
}
