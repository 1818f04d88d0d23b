#include "charprobe/common/http_json.hpp"

#include <httplib.h>

#include "charprobe/common/error.hpp"

namespace charprobe::net {

Endpoint parse_endpoint(std::string_view url) {
  std::string s(url);
  if (s.find("://") == std::string::npos) s = "http://" + s;
  const auto host_start = s.find("://") + 3;
  const auto slash = s.find('/', host_start);
  Endpoint e;
  if (slash == std::string::npos) {
    e.scheme_host_port = s;
  } else {
    e.scheme_host_port = s.substr(0, slash);
    e.base_path = s.substr(slash);
    while (!e.base_path.empty() && e.base_path.back() == '/') e.base_path.pop_back();
  }
  if (e.scheme_host_port.size() <= host_start) throw Error(ErrorCode::InvalidConfig, "bad endpoint '" + s + "'");
  return e;
}

nlohmann::json post_json(const Endpoint& endpoint, std::string_view path, const nlohmann::json& body,
                         std::chrono::milliseconds timeout) {
  httplib::Client client(endpoint.scheme_host_port);
  const auto secs = static_cast<time_t>(timeout.count() / 1000);
  const auto usecs = static_cast<time_t>((timeout.count() % 1000) * 1000);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  const std::string full_path = endpoint.base_path + std::string(path);
  auto res = client.Post(full_path, body.dump(), "application/json");
  if (!res) {
    const auto err = res.error();
    const std::string what = endpoint.scheme_host_port + full_path + ": " + httplib::to_string(err);
    if (err == httplib::Error::Read || err == httplib::Error::Write || err == httplib::Error::ConnectionTimeout) {
      throw TransportFailure(TransportFailure::Kind::Timeout, what);
    }
    throw TransportFailure(TransportFailure::Kind::Unreachable, what);
  }
  if (res->status != 200) {
    throw TransportFailure(TransportFailure::Kind::Status,
                           endpoint.scheme_host_port + full_path + ": HTTP " + std::to_string(res->status));
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedResponse, full_path + ": " + e.what());
  }
}

nlohmann::json call_json(const Endpoint& endpoint, std::string_view path, const nlohmann::json& body,
                         std::chrono::milliseconds timeout) {
  try {
    return post_json(endpoint, path, body, timeout);
  } catch (const TransportFailure& f) {
    throw Error(f.kind() == TransportFailure::Kind::Timeout ? ErrorCode::Timeout : ErrorCode::BackendUnreachable,
                f.what());
  }
}

}  // namespace charprobe::net
