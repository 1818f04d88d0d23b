// charprobe: clean -> generate -> evaluate -> annotate -> report.

#include <csignal>
#include <iostream>
#include <map>
#include <pthread.h>
#include <thread>

#include <CLI11.hpp>

#include "charprobe/annotation/service.hpp"
#include "charprobe/common/error.hpp"
#include "charprobe/corpus/ingest.hpp"
#include "charprobe/pipeline/commands.hpp"

using namespace charprobe;

namespace {

// Capitalized-token frequencies over raw tweets and articles, to help curate
// the entity list by hand. Not used by any other command.
void list_entity_candidates(const pipeline::RunConfig& cfg, std::size_t top) {
  std::map<std::string, std::size_t> freq;
  auto count = [&](const std::string& text) {
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
      std::string tok = text.substr(i, j - i);
      while (!tok.empty() && std::ispunct(static_cast<unsigned char>(tok.back()))) tok.pop_back();
      if (tok.size() > 1 && std::isupper(static_cast<unsigned char>(tok[0]))) ++freq[tok];
      i = j;
    }
  };
  for (const auto& p : cfg.tweet_files) {
    for (const auto& t : corpus::read_tweets(p).items) count(t.text);
  }
  for (const auto& a : cfg.article_sources) {
    for (const auto& d : corpus::ingest_articles(a.path, a.media_house).items) count(d.text);
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > top) ranked.resize(top);
  for (const auto& [tok, n] : ranked) std::cout << n << "\t" << tok << "\n";
}

int serve(const pipeline::RunConfig& cfg, std::optional<int> port_override) {
  // Block the stop signals before any thread starts so sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  auto store = pipeline::open_annotation_store(cfg);
  annotation::ServiceOptions opts;
  opts.host = cfg.host;
  opts.port = port_override.value_or(cfg.port);
  opts.run_id = cfg.run_id;
  opts.static_dir = cfg.static_dir;
  annotation::AnnotationService service(store, opts);
  const int port = service.bind();
  std::cout << "serving run " << cfg.run_id << " (" << store.entailments().size() << " entailments) on http://"
            << cfg.host << ":" << port << "\n"
            << std::flush;

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    service.stop();
  });
  service.run();
  // run() also returns on its own when the listener fails; wake the waiter.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  std::cout << "stopped; " << store.size() << " annotations in " << cfg.annotation_log().string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Probe domain-adapted language models for entity characterization"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("-c,--config", config_path, "run configuration (JSON)")->required();

  auto* clean = app.add_subcommand("clean", "clean the tweet corpus and ingest articles");
  auto* generate = app.add_subcommand("generate", "render prompts and collect valid entailments");
  auto* evaluate = app.add_subcommand("evaluate", "sentiment, adjectives, embeddings and clustering");
  auto* serve_cmd = app.add_subcommand("serve", "run the annotation service");
  std::optional<int> port;
  serve_cmd->add_option("--port", port, "override the configured port (0 picks a free port)");
  auto* import = app.add_subcommand("import-annotations", "import annotations from CSV");
  std::string csv;
  import->add_option("csv", csv, "CSV with entailment_id,annotator_id,relevant,characterizing[,timestamp]")
      ->required();
  auto* report = app.add_subcommand("report", "write report tables for the run");
  auto* run = app.add_subcommand("run", "clean, generate, evaluate and report");
  auto* entities = app.add_subcommand("entities", "list frequent capitalized tokens as entity candidates");
  std::size_t top = 50;
  entities->add_option("--top", top, "number of candidates");
  auto* show = app.add_subcommand("show-config", "print the canonical configuration and its hash");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = pipeline::RunConfig::load(config_path);
    auto& log = std::cout;
    if (clean->parsed()) {
      pipeline::cmd_clean(cfg, log);
    } else if (generate->parsed()) {
      pipeline::cmd_generate(cfg, log);
    } else if (evaluate->parsed()) {
      pipeline::cmd_evaluate(cfg, log);
    } else if (serve_cmd->parsed()) {
      return serve(cfg, port);
    } else if (import->parsed()) {
      pipeline::cmd_import_annotations(cfg, csv, log);
    } else if (report->parsed()) {
      pipeline::cmd_report(cfg, log);
    } else if (run->parsed()) {
      if (!cfg.tweet_files.empty() || !cfg.article_sources.empty()) pipeline::cmd_clean(cfg, log);
      pipeline::cmd_generate(cfg, log);
      pipeline::cmd_evaluate(cfg, log);
      pipeline::cmd_report(cfg, log);
    } else if (entities->parsed()) {
      list_entity_candidates(cfg, top);
    } else if (show->parsed()) {
      std::cout << cfg.canonical.dump(2) << "\nsha256 " << cfg.hash << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "charprobe: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "charprobe: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
