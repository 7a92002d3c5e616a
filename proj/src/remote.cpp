#include "hifact/remote.hpp"

#include <httplib.h>

#include "hifact/error.hpp"

namespace hifact {

Endpoint parse_endpoint(const std::string& url) {
  Endpoint ep;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "endpoint '" + url + "' lacks a scheme");
  }
  ep.scheme = url.substr(0, scheme_end);
  if (ep.scheme != "http") {
    throw Error(ErrorCode::InvalidArgument,
                "unsupported scheme '" + ep.scheme + "' (only http)");
  }
  const std::string rest = url.substr(scheme_end + 3);
  const auto slash = rest.find('/');
  const std::string authority = rest.substr(0, slash);
  ep.path = slash == std::string::npos ? "/" : rest.substr(slash);
  const auto colon = authority.rfind(':');
  if (colon != std::string::npos) {
    ep.host = authority.substr(0, colon);
    try {
      std::size_t used = 0;
      ep.port = std::stoi(authority.substr(colon + 1), &used);
      if (used != authority.size() - colon - 1) throw std::invalid_argument("port");
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad port in endpoint '" + url + "'");
    }
  } else {
    ep.host = authority;
  }
  if (ep.host.empty() || ep.port < 1 || ep.port > 65535) {
    throw Error(ErrorCode::InvalidArgument, "bad endpoint '" + url + "'");
  }
  return ep;
}

JsonHttpClient::JsonHttpClient(const std::string& url, int timeout_ms,
                               int max_in_flight)
    : endpoint_(parse_endpoint(url)),
      timeout_ms_(timeout_ms),
      slots_(std::make_unique<std::counting_semaphore<>>(
          std::max(1, max_in_flight))) {
  if (timeout_ms < 1) throw Error(ErrorCode::InvalidArgument, "timeout_ms must be >= 1");
}

JsonHttpClient::~JsonHttpClient() = default;

nlohmann::json JsonHttpClient::post(const nlohmann::json& body) const {
  slots_->acquire();
  struct Release {
    std::counting_semaphore<>& sem;
    ~Release() { sem.release(); }
  } release{*slots_};

  httplib::Client client(endpoint_.host, endpoint_.port);
  const auto timeout = std::chrono::milliseconds(timeout_ms_);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  const auto res = client.Post(endpoint_.path, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::Transport, "POST " + endpoint_.host + ":" +
                                          std::to_string(endpoint_.port) +
                                          endpoint_.path + " failed: " +
                                          httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(ErrorCode::Remote,
                "status " + std::to_string(res->status) + ": " + res->body);
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Protocol, std::string("response is not JSON: ") + e.what());
  }
}

}  // namespace hifact
