#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <thread>

#include "charprobe/annotation/service.hpp"
#include "charprobe/annotation/store.hpp"
#include "charprobe/common/error.hpp"
#include "support/support.hpp"

using namespace charprobe;
using namespace charprobe::annotation;
namespace ts = testsupport;
using nlohmann::json;

namespace {

std::vector<genclient::Entailment> entailments(int n) {
  std::vector<genclient::Entailment> out;
  for (int i = 0; i < n; ++i) {
    genclient::Entailment e;
    e.id = "m/prefix.lacks/jane/" + std::to_string(i + 1);
    e.entity = "Jane";
    e.prefix_id = "lacks";
    e.template_id = "prefix.lacks";
    e.prompt = "Jane lacks";
    e.text = "patience " + std::to_string(i);
    e.model_tag = "m";
    e.valid = true;
    out.push_back(e);
  }
  return out;
}

ServiceOptions options(const std::string& run_id) {
  ServiceOptions o;
  o.port = 0;
  o.run_id = run_id;
  return o;
}

// Runs a service on a free port for the lifetime of the object.
struct Running {
  Running(AnnotationStore& store, const std::string& run_id) : service(store, options(run_id)) {
    port = service.bind();
    thread = std::thread([this] { service.run(); });
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
    for (int i = 0; i < 100; ++i) {
      if (client->Get("/api/health")) break;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
  }
  ~Running() {
    service.stop();
    thread.join();
  }
  AnnotationService service;
  int port = 0;
  std::thread thread;
  std::unique_ptr<httplib::Client> client;
};

json label(const std::string& id, const std::string& who, bool rel, bool chr) {
  return {{"entailment_id", id}, {"annotator_id", who}, {"relevant", rel}, {"characterizing", chr}};
}

}  // namespace

TEST_CASE("health reports the run id") {
  AnnotationStore store(entailments(3));
  Running r(store, "run-42");
  const auto res = r.client->Get("/api/health");
  REQUIRE(res);
  CHECK(res->status == 200);
  const auto body = json::parse(res->body);
  CHECK(body["run_id"] == "run-42");
  CHECK(body["entailments"] == 3);
}

TEST_CASE("tasks, label submission and stats") {
  ts::TempDir dir;
  const auto ents = entailments(4);
  AnnotationStore store(ents, dir / "log.jsonl");
  Running r(store, "run");
  auto res = r.client->Get("/api/tasks?annotator=ann1&limit=2");
  REQUIRE(res);
  auto body = json::parse(res->body);
  REQUIRE(body["tasks"].size() == 2);
  CHECK(body["tasks"][0]["entailment_id"] == ents[0].id);
  CHECK(body["tasks"][0]["text"] == "patience 0");

  res = r.client->Post("/api/labels", label(ents[0].id, "ann1", true, true).dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK_FALSE(json::parse(res->body)["timestamp"].get<std::string>().empty());

  res = r.client->Get("/api/stats");
  REQUIRE(res);
  body = json::parse(res->body);
  CHECK(body["annotations"] == 1);
  CHECK(body["relevant_and_characterizing"] == 1);
  CHECK(body["annotators"] == json::array({"ann1"}));

  res = r.client->Get("/api/tasks?annotator=ann1");
  body = json::parse(res->body);
  CHECK(body["tasks"].size() == 3);
  CHECK(body["tasks"][0]["entailment_id"] == ents[1].id);
  CHECK(ts::read_jsonl(dir / "log.jsonl").size() == 1);
}

TEST_CASE("error statuses") {
  AnnotationStore store(entailments(2));
  Running r(store, "run");
  auto res = r.client->Post("/api/labels", label("nope", "a", true, false).dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == 404);
  CHECK(json::parse(res->body)["error"] == "UnknownEntailment");
  res = r.client->Post("/api/labels", label(store.entailments()[0].id, "a", false, true).dump(), "application/json");
  CHECK(res->status == 422);
  res = r.client->Post("/api/labels", "{oops", "application/json");
  CHECK(res->status == 400);
  res = r.client->Post("/api/labels", R"({"entailment_id":"x"})", "application/json");
  CHECK(res->status == 400);
  res = r.client->Get("/api/tasks");
  CHECK(res->status == 400);
  res = r.client->Get("/api/tasks?annotator=a&limit=0");
  CHECK(res->status == 400);
  res = r.client->Get("/api/agreement?a=x&b=y");
  CHECK(res->status == 404);
  res = r.client->Get("/api/agreement?a=x");
  CHECK(res->status == 400);
}

TEST_CASE("agreement endpoint") {
  AnnotationStore store(entailments(4));
  const auto& ents = store.entailments();
  const bool a_rel[] = {true, true, false, false}, b_rel[] = {true, false, false, true};
  for (std::size_t i = 0; i < 4; ++i) {
    store.submit(AnnotationRecord::from_json(label(ents[i].id, "a", a_rel[i], false)));
    store.submit(AnnotationRecord::from_json(label(ents[i].id, "b", b_rel[i], false)));
  }
  Running r(store, "run");
  const auto res = r.client->Get("/api/agreement?a=a&b=b");
  REQUIRE(res);
  CHECK(res->status == 200);
  const auto body = json::parse(res->body);
  CHECK(body["n"] == 4);
  CHECK(body["kappa_relevant"].get<double>() == doctest::Approx(0.0));
  CHECK(body["kappa_characterizing"].is_null());
}

TEST_CASE("concurrent submitters are all persisted") {
  ts::TempDir dir;
  const auto ents = entailments(20);
  {
    AnnotationStore store(ents, dir / "log.jsonl");
    Running r(store, "run");
    std::vector<std::thread> workers;
    std::atomic<int> ok{0};
    for (int t = 0; t < 6; ++t) {
      workers.emplace_back([&, t] {
        httplib::Client c("127.0.0.1", r.port);
        for (const auto& e : ents) {
          auto res = c.Post("/api/labels", label(e.id, "ann" + std::to_string(t), true, t % 2 == 0).dump(),
                            "application/json");
          if (res && res->status == 200) ++ok;
        }
      });
    }
    for (auto& w : workers) w.join();
    CHECK(ok == 120);
    const auto stats = json::parse(r.client->Get("/api/stats")->body);
    CHECK(stats["annotations"] == 120);
  }
  AnnotationStore replay(ents, dir / "log.jsonl");
  CHECK(replay.size() == 120);
  CHECK(replay.annotators().size() == 6);
}

TEST_CASE("static files are served at the root") {
  ts::TempDir dir;
  ts::spit(dir / "ui/index.html", "<html>ui</html>");
  AnnotationStore store(entailments(1));
  auto opts = options("r");
  opts.static_dir = dir / "ui";
  AnnotationService service(store, opts);
  const int port = service.bind();
  std::thread th([&] { service.run(); });
  httplib::Client c("127.0.0.1", port);
  httplib::Result res;
  for (int i = 0; i < 100 && !(res = c.Get("/index.html")); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
  REQUIRE(res);
  CHECK(res->body == "<html>ui</html>");
  service.stop();
  th.join();
  CHECK_THROWS_AS(AnnotationService(store, {}).run(), Error);
}
