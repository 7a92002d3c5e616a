#include "hifact/service.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <httplib.h>

#include "hifact/error.hpp"

namespace hifact {

namespace {

HttpReply error_reply(int status, std::string_view code,
                      std::optional<std::string> detail = std::nullopt) {
  HttpReply reply;
  reply.status = status;
  reply.body["error"] = std::string(code);
  if (detail) reply.body["detail"] = *detail;
  return reply;
}

}  // namespace

ProviderKind parse_provider_kind(std::string_view text) {
  if (text == "reference") return ProviderKind::Reference;
  if (text == "remote") return ProviderKind::Remote;
  throw Error(ErrorCode::InvalidArgument, "unknown provider '" + std::string(text) + "'");
}

void ServiceConfig::validate(bool require_files) const {
  if (port < 1 || port > 65535) throw Error(ErrorCode::InvalidArgument, "port out of range");
  if (request_timeout_ms < 1 || max_in_flight < 1) {
    throw Error(ErrorCode::InvalidArgument,
                "request_timeout_ms and max_in_flight must be >= 1");
  }
  if (!require_files) return;
  for (const auto* path : {&corpus_path, &index_path, &checkpoint_path}) {
    if (path->empty() || !std::filesystem::exists(*path)) {
      throw Error(ErrorCode::Io, "required file '" + *path + "' does not exist");
    }
  }
}

std::shared_ptr<const EmbeddingProvider> make_encoder(ProviderKind kind,
                                                      const EncoderConfig& config) {
  if (kind == ProviderKind::Remote) return std::make_shared<RemoteEncoder>(config);
  return std::make_shared<ReferenceEncoder>(config);
}

std::shared_ptr<const ExplanationGenerator> make_generator(ProviderKind kind,
                                                           const GeneratorConfig& config) {
  if (kind == ProviderKind::Remote) return std::make_shared<RemoteGenerator>(config);
  return std::make_shared<ReferenceGenerator>();
}

ServiceSnapshot load_snapshot(const ServiceConfig& config) {
  ServiceSnapshot snap;
  const Corpus corpus = load_corpus(config.corpus_path);
  snap.artifacts = std::make_shared<const PipelineArtifacts>(load_artifacts(
      corpus, config.index_path, config.checkpoint_path,
      make_encoder(config.encoder, config.encoder_config),
      make_generator(config.generator, config.generator_config),
      config.prompt_label_source));
  if (!corpus.empty()) snap.stats = corpus_stats(corpus, EnglishLexicon::builtin());
  if (!config.report_path.empty() && std::filesystem::exists(config.report_path)) {
    std::ifstream in(config.report_path, std::ios::binary);
    try {
      snap.report = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Parse, "report '" + config.report_path + "': " + e.what());
    }
  }
  return snap;
}

VerifyService::VerifyService(ServiceConfig config)
    : config_(std::move(config)),
      snapshot_(std::make_shared<const ServiceSnapshot>()),
      slots_(std::make_unique<std::counting_semaphore<>>(config_.max_in_flight)) {
  config_.validate(false);
  allowed_origin_ = config_.allowed_origin;
  if (allowed_origin_.empty()) {
    if (const char* env = std::getenv("HIFACT_ALLOWED_ORIGIN"); env) allowed_origin_ = env;
  }
}

void VerifyService::install(ServiceSnapshot snapshot) {
  auto next = std::make_shared<const ServiceSnapshot>(std::move(snapshot));
  std::lock_guard lock(snapshot_mutex_);
  snapshot_ = std::move(next);
}

std::shared_ptr<const ServiceSnapshot> VerifyService::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return snapshot_;
}

void VerifyService::reload() {
  std::lock_guard lock(reload_mutex_);
  install(load_snapshot(config_));
}

HttpReply VerifyService::handle_verify(std::string_view body) const {
  nlohmann::json request;
  try {
    request = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception&) {
    return error_reply(400, "bad_request", "body is not valid JSON");
  }
  if (!request.is_object()) return error_reply(400, "bad_request", "body must be an object");
  const auto it = request.find("claim");
  if (it == request.end() || it->is_null()) return error_reply(400, "empty_claim");
  if (!it->is_string()) return error_reply(400, "bad_request", "claim must be a string");
  const std::string claim = it->get<std::string>();
  if (is_blank(claim)) return error_reply(400, "empty_claim");

  const auto snap = snapshot();
  if (!snap->artifacts) return error_reply(503, "artifacts_not_loaded");

  if (!slots_->try_acquire_for(std::chrono::milliseconds(config_.request_timeout_ms))) {
    return error_reply(503, "busy");
  }
  struct Release {
    std::counting_semaphore<>& sem;
    ~Release() { sem.release(); }
  } release{*slots_};

  const auto started = std::chrono::steady_clock::now();
  try {
    const FactCheckResult result = verify(*snap->artifacts, claim);
    const auto elapsed = std::chrono::steady_clock::now() - started;
    HttpReply reply;
    reply.body = to_json(result);
    reply.body["latency_ms"] =
        std::chrono::duration<double, std::milli>(elapsed).count();
    return reply;
  } catch (const Error& e) {
    if (is_upstream_error(e.code())) return error_reply(502, "upstream", e.what());
    if (e.code() == ErrorCode::EmptyClaim || e.code() == ErrorCode::EmptyText) {
      return error_reply(400, "empty_claim", e.what());
    }
    if (e.code() == ErrorCode::EmptyIndex) return error_reply(503, "empty_index", e.what());
    return error_reply(500, "internal", e.what());
  } catch (const std::exception& e) {
    return error_reply(500, "internal", e.what());
  }
}

HttpReply VerifyService::handle_health() const {
  const auto snap = snapshot();
  HttpReply reply;
  reply.body["status"] = "ok";
  reply.body["index_size"] = snap->artifacts ? snap->artifacts->index.size() : 0;
  reply.body["model_loaded"] = static_cast<bool>(snap->artifacts);
  return reply;
}

HttpReply VerifyService::handle_stats() const {
  const auto snap = snapshot();
  if (!snap->stats) return error_reply(404, "stats_unavailable");
  return {200, to_json(*snap->stats)};
}

HttpReply VerifyService::handle_report() const {
  const auto snap = snapshot();
  if (!snap->report) return error_reply(404, "no_report");
  return {200, *snap->report};
}

void VerifyService::mount(httplib::Server& server) const {
  const auto send = [this](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body.dump(), "application/json");
  };
  server.Post("/api/verify", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, handle_verify(req.body));
  });
  server.Get("/api/health", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, handle_health());
  });
  server.Get("/api/stats", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, handle_stats());
  });
  server.Get("/api/report", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, handle_report());
  });
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
  server.set_error_handler([send](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const char* code = res.status == 404 ? "not_found"
                       : res.status == 405 ? "method_not_allowed"
                                           : "http_error";
    send(res, error_reply(res.status, code));
  });
  server.set_exception_handler(
      [send](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string detail = "unknown";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          detail = e.what();
        } catch (...) {
        }
        send(res, error_reply(500, "internal", detail));
      });
  if (!allowed_origin_.empty()) {
    server.set_post_routing_handler(
        [origin = allowed_origin_](const httplib::Request&, httplib::Response& res) {
          res.set_header("Access-Control-Allow-Origin", origin);
          res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
          res.set_header("Access-Control-Allow-Headers", "Content-Type");
        });
  }
}

HttpServer::HttpServer(const VerifyService& service)
    : server_(std::make_unique<httplib::Server>()),
      threads_(service.config().max_in_flight + 4) {
  const int threads = threads_;
  server_->new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  service.mount(*server_);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = server_->bind_to_any_port(host.c_str());
  } else if (!server_->bind_to_port(host.c_str(), port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return bound;
}

void HttpServer::wait() {
  if (thread_.joinable()) thread_.join();
}

void HttpServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace hifact
