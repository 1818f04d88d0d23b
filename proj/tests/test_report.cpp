#include <doctest.h>

#include <cmath>
#include <limits>

#include "charprobe/common/digest.hpp"
#include "charprobe/common/error.hpp"
#include "charprobe/report/bundle.hpp"
#include "charprobe/report/table.hpp"
#include "support/support.hpp"

using namespace charprobe;
using namespace charprobe::report;
namespace ts = testsupport;

namespace {

nlpmetrics::SentimentRow sentiment_row(const std::string& g, std::size_t neg, std::size_t pos) {
  nlpmetrics::SentimentRow r;
  r.group = g;
  r.negative = neg;
  r.positive = pos;
  r.pct_positive = 100.0 * static_cast<double>(pos) / static_cast<double>(neg + pos);
  r.pct_negative = 100.0 - r.pct_positive;
  return r;
}

ReportInputs full_inputs() {
  ReportInputs in;
  in.run_id = "r1";
  in.manifest = {{"config_hash", "abc"}};
  in.provenance = {"gen", "sent", "adj", "emb", "ann", "clu"};
  in.fail_counts = std::vector<FailCountRow>{{"is a very", 2, 12, 10, 2, 0, 0}};
  in.sentiment_by_prompt = std::vector<nlpmetrics::SentimentRow>{sentiment_row("is a very", 34, 666)};
  nlpmetrics::SentimentGrid g;
  g.entities = {"E1", "E2"};
  g.sources = {"M1", "M2"};
  g.pct_positive = {{100.0 * 74 / 80, std::nullopt}, {100.0 * 73 / 80, 50.0}};
  g.totals = {{80, 0}, {80, 2}};
  in.sentiment_by_entity_source = g;
  in.adjective_presence = std::vector<nlpmetrics::AdjectivePresenceRow>{{"is a very", 3, 45}};
  annotation::RelevanceSummary s;
  s.non_relevant = 1;
  s.consensus_total = 1;
  s.pct_non_relevant = 100.0;
  in.relevance_summary = s;
  in.per_prompt_relevance = std::vector<annotation::PromptRelevanceRow>{{"is a very", 1, 0, 0, 0.0, 0.0, std::nullopt}};
  annotation::AgreementReport a;
  a.annotator_a = "x";
  a.annotator_b = "y";
  a.n = 20;
  a.kappa_relevant = 29.0 / 44.0;
  in.agreement = std::vector<annotation::AgreementReport>{a};
  in.prompt_performance = build_prompt_performance({"is a very", "lacks"}, {{"is a very", 0.571}}, {},
                                                   *in.adjective_presence, *in.sentiment_by_prompt,
                                                   *in.per_prompt_relevance);
  in.cluster_crosstab = std::vector<CrosstabRow>{{0, 1, 2, 0, 3, 1, 1, 1, 0}};
  in.k_selection = std::vector<clusterlab::KScore>{{2, 1.5, 0.25, std::numeric_limits<double>::infinity()},
                                                   {3, 1.0, 0.5, 12.0}};
  in.chosen_k = 3;
  return in;
}

const Table& table(const ReportBundle& b, const std::string& name) {
  for (const auto& t : b.tables) {
    if (t.name == name) return t;
  }
  FAIL("no table " << name);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("cell formatting") {
  CHECK(Cell::number(96.875, 2).str() == "96.88");
  CHECK(Cell::number(91.25, 1).str() == "91.3");
  CHECK(Cell::number(std::nan(""), 2).is_absent());
  CHECK(Cell::number(std::optional<double>{}, 2).str() == "n/a");
  CHECK(Cell::number(std::numeric_limits<double>::infinity(), 2).str() == "inf");
  CHECK_FALSE(Cell::number(std::numeric_limits<double>::infinity(), 2).is_text());
  CHECK(Cell::count(7).str() == "7");
  CHECK(Cell::text("a").is_text());
  CHECK_FALSE(Cell::absent().is_text());
}

TEST_CASE("csv and markdown rendering") {
  Table t{"t", "Title", "src", {"name", "value"}, {}};
  t.rows.push_back({Cell::text("a,b"), Cell::number(1.5, 1)});
  t.rows.push_back({Cell::text("c|d"), Cell::absent()});
  CHECK(to_csv(t) == "name,value\n\"a,b\",1.5\nc|d,n/a\n");
  ReportBundle b{"run", {t}, {{"missing", "no data"}}, {}};
  CHECK(to_markdown(b) ==
        "# Report: run\n\n## Title\n\nTable `t`. Source: src\n\n| name | value |\n| --- | ---: |\n"
        "| a,b | 1.5 |\n| c\\|d | n/a |\n\n## Tables not produced\n\n- `missing`: no data\n");
}

TEST_CASE("bundle has the fixed table order and formats each value once") {
  const auto b = build_bundle(full_inputs());
  std::vector<std::string> names;
  for (const auto& t : b.tables) names.push_back(t.name);
  CHECK(names == std::vector<std::string>{"fail_counts", "sentiment_by_prompt", "sentiment_by_entity_source",
                                          "adjective_presence", "relevance_summary", "per_prompt_relevance",
                                          "agreement", "prompt_performance", "cluster_crosstab",
                                          "k_selection_curves"});
  CHECK(b.absent.empty());
  CHECK(table(b, "sentiment_by_prompt").rows[0][3].str() == "95.14");
  const auto& grid = table(b, "sentiment_by_entity_source");
  CHECK(grid.columns == std::vector<std::string>{"entity", "M1", "M2"});
  CHECK(grid.rows[0][1].str() == "92.5");
  CHECK(grid.rows[0][2].str() == "n/a");
  CHECK(grid.rows[1][1].str() == "91.3");
  CHECK(table(b, "agreement").rows[0][3].str() == "0.66");
  CHECK(table(b, "agreement").rows[0][4].str() == "n/a");
  const auto& perf = table(b, "prompt_performance");
  CHECK(perf.columns == std::vector<std::string>{"measure", "is a very", "lacks"});
  CHECK(perf.rows[0][0].str() == "adjectives_centroid_distance (cosine)");
  CHECK(perf.rows[0][1].str() == "0.57");
  CHECK(perf.rows[0][2].is_absent());
  CHECK(perf.rows[2][1].str() == "93.75");
  const auto& k = table(b, "k_selection_curves");
  CHECK(k.rows[0][3].str() == "inf");
  CHECK(k.rows[1][4].str() == "yes");
  CHECK(b.manifest.back() == std::pair<std::string, std::string>{"distance_metric", "cosine"});
}

TEST_CASE("missing inputs become absent tables with reasons") {
  ReportInputs in;
  in.run_id = "r";
  in.absent_reasons = {{"agreement", "no annotations"}};
  const auto b = build_bundle(in);
  CHECK(b.tables.empty());
  REQUIRE(b.absent.size() == 10);
  CHECK(b.absent[6].name == "agreement");
  CHECK(b.absent[6].reason == "no annotations");
  CHECK(b.absent[0].reason == "not computed");
}

TEST_CASE("emit writes every file, replaces old outputs and records table digests") {
  ts::TempDir dir;
  ts::spit(dir / "out/stale.csv", "old");
  ts::spit(dir / "out/keep.json", "{}");
  const auto b = build_bundle(full_inputs());
  const auto written = emit(b, dir / "out");
  CHECK(written.size() == 12);
  CHECK_FALSE(std::filesystem::exists(dir / "out/stale.csv"));
  CHECK(std::filesystem::exists(dir / "out/keep.json"));
  const auto manifest = ts::slurp(dir / "out/manifest.txt");
  CHECK(manifest.rfind("run_id: r1\nconfig_hash: abc\n", 0) == 0);
  const auto csv = ts::slurp(dir / "out/fail_counts.csv");
  CHECK(manifest.find("  fail_counts.csv " + sha256_hex(csv)) != std::string::npos);
  CHECK(ts::slurp(dir / "out/report.md") == to_markdown(b));
  emit(b, dir / "out");
  CHECK(ts::slurp(dir / "out/manifest.txt") == manifest);

  ReportInputs none;
  none.run_id = "r";
  const auto only = emit(build_bundle(none), dir / "out");
  REQUIRE(only.size() == 1);
  CHECK(only[0].filename() == "manifest.txt");
  CHECK_FALSE(std::filesystem::exists(dir / "out/report.md"));

  auto bad = b;
  bad.tables[0].rows[0].pop_back();
  CHECK_THROWS_AS(emit(bad, dir / "bad"), Error);
}
