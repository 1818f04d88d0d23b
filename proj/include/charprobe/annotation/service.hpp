#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "charprobe/annotation/store.hpp"

namespace httplib {
class Server;
}

namespace charprobe::annotation {

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8765;  // 0 picks a free port
  std::string run_id;
  std::optional<std::filesystem::path> static_dir;  // served at /
  std::size_t max_task_limit = 200;
};

// JSON endpoints under /api used by the annotation UI:
//   GET  /api/health
//   GET  /api/tasks?annotator=ID&limit=N
//   POST /api/labels
//   GET  /api/stats
//   GET  /api/agreement?a=ID1&b=ID2
class AnnotationService {
 public:
  AnnotationService(AnnotationStore& store, ServiceOptions options);
  ~AnnotationService();

  // Binds and returns the bound port. Throws IoError when binding fails.
  int bind();
  // Blocks until stop() is called. bind() must have succeeded.
  void run();
  void stop();
  int port() const { return port_; }

 private:
  void install_routes();

  AnnotationStore& store_;
  ServiceOptions options_;
  std::unique_ptr<httplib::Server> server_;
  int port_ = -1;
};

}  // namespace charprobe::annotation
