// HTTP stand-in for the model servers:
//   POST /generate {"prompt", "model", ...}  -> {"text"}    scripted per model tag
//   POST /embed    {"texts"}                 -> {"vectors"} hash embedder
//   POST /classify {"texts"}                 -> {"labels"}  lexicon sentiment
//   GET  /health                             -> {"status": "ok"}

#include <csignal>
#include <iostream>
#include <map>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <httplib.h>

#include "charprobe/common/error.hpp"
#include "charprobe/embedkit/embedding.hpp"
#include "charprobe/genclient/scripted.hpp"
#include "charprobe/nlpmetrics/sentiment.hpp"

using namespace charprobe;

namespace {

httplib::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mock generation, embedding and classification server"};
  std::string host = "127.0.0.1";
  int port = 8900;
  std::vector<std::string> scripts;
  std::string default_script;
  std::string lexicon;
  std::size_t dim = 16;
  std::uint64_t seed = 0;
  app.add_option("--host", host);
  app.add_option("--port", port, "0 picks a free port");
  app.add_option("--script", scripts, "MODEL_TAG=script.json; repeatable");
  app.add_option("--default-script", default_script, "script for model tags without their own");
  app.add_option("--lexicon", lexicon, "sentiment lexicon for /classify");
  app.add_option("--dim", dim, "embedding dimension");
  app.add_option("--seed", seed, "embedding seed");
  CLI11_PARSE(app, argc, argv);

  try {
    std::map<std::string, std::unique_ptr<genclient::ScriptedBackend>> by_model;
    for (const auto& s : scripts) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw Error(ErrorCode::InvalidArgument, "--script expects MODEL_TAG=PATH");
      by_model[s.substr(0, eq)] =
          std::make_unique<genclient::ScriptedBackend>(genclient::MockScript::load(s.substr(eq + 1)));
    }
    std::unique_ptr<genclient::ScriptedBackend> fallback;
    if (!default_script.empty()) {
      fallback = std::make_unique<genclient::ScriptedBackend>(genclient::MockScript::load(default_script));
    }
    const embedkit::HashEmbedder embedder(dim, seed);
    std::optional<nlpmetrics::LexiconSentiment> classifier;
    if (!lexicon.empty()) classifier = nlpmetrics::LexiconSentiment::load(lexicon);

    httplib::Server server;
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) { reply(res, 200, {{"status", "ok"}}); });
    server.Post("/generate", [&](const httplib::Request& req, httplib::Response& res) {
      try {
        const auto body = json::parse(req.body);
        genclient::GenerationRequest g;
        g.prompt = body.at("prompt").get<std::string>();
        const auto model = body.value("model", std::string());
        auto it = by_model.find(model);
        auto* backend = it != by_model.end() ? it->second.get() : fallback.get();
        if (!backend) return reply(res, 404, {{"error", "unknown model '" + model + "'"}});
        reply(res, 200, {{"text", backend->request(g)}});
      } catch (const json::exception& e) {
        reply(res, 400, {{"error", e.what()}});
      } catch (const std::exception& e) {
        reply(res, 503, {{"error", e.what()}});
      }
    });
    server.Post("/embed", [&](const httplib::Request& req, httplib::Response& res) {
      try {
        const auto texts = json::parse(req.body).at("texts").get<std::vector<std::string>>();
        json vectors = json::array();
        for (const auto& v : embedder.embed(texts)) vectors.push_back(v.values);
        reply(res, 200, {{"vectors", vectors}});
      } catch (const std::exception& e) {
        reply(res, 400, {{"error", e.what()}});
      }
    });
    server.Post("/classify", [&](const httplib::Request& req, httplib::Response& res) {
      if (!classifier) return reply(res, 404, {{"error", "no lexicon loaded"}});
      try {
        const auto texts = json::parse(req.body).at("texts").get<std::vector<std::string>>();
        json labels = json::array();
        for (const auto& l : classifier->classify(texts)) {
          labels.push_back({{"label", std::string(nlpmetrics::to_string(l.value))}, {"score", l.score}});
        }
        reply(res, 200, {{"labels", labels}});
      } catch (const std::exception& e) {
        reply(res, 400, {{"error", e.what()}});
      }
    });

    const int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw Error(ErrorCode::IoError, "cannot bind " + host + ":" + std::to_string(port));
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "listening on http://" << host << ":" << bound << "\n" << std::flush;
    server.listen_after_bind();
  } catch (const std::exception& e) {
    std::cerr << "mock_backend: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
