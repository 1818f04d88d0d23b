#include "charprobe/annotation/service.hpp"

#include <httplib.h>

#include "charprobe/annotation/agreement.hpp"
#include "charprobe/common/error.hpp"

namespace charprobe::annotation {

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownEntailment:
    case ErrorCode::NoOverlap: return 404;
    case ErrorCode::InvariantViolation: return 422;
    case ErrorCode::MalformedRecord:
    case ErrorCode::InvalidArgument: return 400;
    default: return 500;
  }
}

void send_error(httplib::Response& res, const Error& e) {
  send_json(res, status_for(e.code()), {{"error", std::string(to_string(e.code()))}, {"message", e.what()}});
}

std::string required_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name) || req.get_param_value(name).empty()) {
    throw Error(ErrorCode::InvalidArgument, std::string("missing query parameter '") + name + "'");
  }
  return req.get_param_value(name);
}

}  // namespace

AnnotationService::AnnotationService(AnnotationStore& store, ServiceOptions options)
    : store_(store), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

AnnotationService::~AnnotationService() { stop(); }

void AnnotationService::install_routes() {
  auto guarded = [](auto fn) {
    return [fn](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_error(res, e);
      } catch (const std::exception& e) {
        send_json(res, 500, {{"error", "internal"}, {"message", e.what()}});
      }
    };
  };

  server_->Get("/api/health", guarded([this](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}, {"run_id", options_.run_id}, {"entailments", store_.entailments().size()}});
  }));

  server_->Get("/api/tasks", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto annotator = required_param(req, "annotator");
    std::size_t limit = 20;
    if (req.has_param("limit")) {
      try {
        const long v = std::stol(req.get_param_value("limit"));
        if (v < 1) throw std::invalid_argument("limit");
        limit = static_cast<std::size_t>(v);
      } catch (const std::exception&) {
        throw Error(ErrorCode::InvalidArgument, "limit must be a positive integer");
      }
    }
    limit = std::min(limit, options_.max_task_limit);
    json tasks = json::array();
    for (const auto& e : store_.tasks(annotator, limit)) {
      tasks.push_back({{"entailment_id", e.id},
                       {"entity", e.entity},
                       {"prefix_id", e.prefix_id},
                       {"template_id", e.template_id},
                       {"prompt", e.prompt},
                       {"text", e.text},
                       {"model_tag", e.model_tag}});
    }
    send_json(res, 200, {{"annotator", annotator}, {"tasks", tasks}});
  }));

  server_->Post("/api/labels", guarded([this](const httplib::Request& req, httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::MalformedRecord, std::string("body is not JSON: ") + e.what());
    }
    send_json(res, 200, store_.submit(AnnotationRecord::from_json(body)).to_json());
  }));

  server_->Get("/api/stats", guarded([this](const httplib::Request&, httplib::Response& res) {
    auto body = relevance_summary(store_.records()).to_json();
    body["annotations"] = store_.size();
    body["annotators"] = store_.annotators();
    send_json(res, 200, body);
  }));

  server_->Get("/api/agreement", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto a = required_param(req, "a");
    const auto b = required_param(req, "b");
    send_json(res, 200, agreement_report(store_.records(), a, b).to_json());
  }));

  if (options_.static_dir && fs::is_directory(*options_.static_dir)) {
    server_->set_mount_point("/", options_.static_dir->string());
  }
}

int AnnotationService::bind() {
  if (options_.port == 0) {
    port_ = server_->bind_to_any_port(options_.host);
  } else {
    port_ = server_->bind_to_port(options_.host, options_.port) ? options_.port : -1;
  }
  if (port_ < 0) {
    throw Error(ErrorCode::IoError, "cannot bind " + options_.host + ":" + std::to_string(options_.port));
  }
  return port_;
}

void AnnotationService::run() {
  if (port_ < 0) throw Error(ErrorCode::InvalidArgument, "bind() before run()");
  server_->listen_after_bind();
}

void AnnotationService::stop() {
  if (server_) server_->stop();
}

}  // namespace charprobe::annotation
