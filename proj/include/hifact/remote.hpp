#pragma once

#include <chrono>
#include <memory>
#include <semaphore>
#include <string>

#include <json.hpp>

namespace hifact {

struct Endpoint {
  std::string scheme;  // "http"
  std::string host;
  int port = 80;
  std::string path = "/";
};

// Accepts http://host[:port][/path]. Throws Error(InvalidArgument).
Endpoint parse_endpoint(const std::string& url);

/// Blocking JSON-over-HTTP POST client shared by the remote encoder and the
/// remote generator. Safe to call from many threads; at most `max_in_flight`
/// requests are outstanding at once, extra callers wait for a slot.
///
/// Failures map to: Error(Transport) for connection/timeout problems,
/// Error(Remote) for non-2xx responses (status and body in the message),
/// Error(Protocol) for a body that is not JSON.
class JsonHttpClient {
 public:
  JsonHttpClient(const std::string& url, int timeout_ms, int max_in_flight = 8);
  ~JsonHttpClient();

  JsonHttpClient(const JsonHttpClient&) = delete;
  JsonHttpClient& operator=(const JsonHttpClient&) = delete;

  nlohmann::json post(const nlohmann::json& body) const;

  const Endpoint& endpoint() const { return endpoint_; }

 private:
  Endpoint endpoint_;
  int timeout_ms_;
  std::unique_ptr<std::counting_semaphore<>> slots_;
};

}  // namespace hifact
