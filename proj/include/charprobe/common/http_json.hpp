#pragma once

#include <chrono>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace charprobe::net {

// One failed round trip that may succeed if retried.
class TransportFailure : public std::runtime_error {
 public:
  enum class Kind { Unreachable, Timeout, Status };
  TransportFailure(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct Endpoint {
  std::string scheme_host_port;  // "http://127.0.0.1:8080"
  std::string base_path;         // "" or "/v1"
};

// Accepts "http://host:port[/prefix]" or "host:port[/prefix]".
Endpoint parse_endpoint(std::string_view url);

// POSTs a JSON body to endpoint + path. Throws TransportFailure for
// connection problems, timeouts and non-200 statuses, and
// Error(MalformedResponse) when the reply is not JSON.
nlohmann::json post_json(const Endpoint& endpoint, std::string_view path, const nlohmann::json& body,
                         std::chrono::milliseconds timeout);

// Single attempt; transport failures become Error(Timeout) or
// Error(BackendUnreachable). Used by the metric and embedding clients.
nlohmann::json call_json(const Endpoint& endpoint, std::string_view path, const nlohmann::json& body,
                         std::chrono::milliseconds timeout);

}  // namespace charprobe::net
