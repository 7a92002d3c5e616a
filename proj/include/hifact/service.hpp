#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <thread>

#include <json.hpp>

#include "hifact/dataset.hpp"
#include "hifact/pipeline.hpp"

namespace httplib {
class Server;
}

namespace hifact {

enum class ProviderKind { Reference, Remote };
ProviderKind parse_provider_kind(std::string_view text);

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string corpus_path;
  std::string split_dir;  // optional; informational
  std::string index_path;
  std::string checkpoint_path;
  std::string report_path;  // optional; served at /api/report
  ProviderKind encoder = ProviderKind::Reference;
  ProviderKind generator = ProviderKind::Reference;
  EncoderConfig encoder_config;
  GeneratorConfig generator_config;
  PromptLabelSource prompt_label_source = PromptLabelSource::Predicted;
  int request_timeout_ms = 30000;
  int max_in_flight = 16;
  std::string allowed_origin;  // falls back to $HIFACT_ALLOWED_ORIGIN

  // Port range, positive limits, and (serve mode) that referenced files exist.
  void validate(bool require_files) const;
};

std::shared_ptr<const EmbeddingProvider> make_encoder(ProviderKind kind,
                                                      const EncoderConfig& config);
std::shared_ptr<const ExplanationGenerator> make_generator(ProviderKind kind,
                                                           const GeneratorConfig& config);

struct HttpReply {
  int status = 200;
  nlohmann::ordered_json body;
};

/// Everything a request reads, swapped as one unit on reload so in-flight
/// requests finish against the snapshot they started with.
struct ServiceSnapshot {
  std::shared_ptr<const PipelineArtifacts> artifacts;
  std::optional<CorpusStats> stats;
  std::optional<nlohmann::ordered_json> report;
};

/// Transport-independent request handlers plus the route wiring for
/// cpp-httplib. Every error body is {"error": <code>, ...}.
class VerifyService {
 public:
  explicit VerifyService(ServiceConfig config);

  void install(ServiceSnapshot snapshot);
  std::shared_ptr<const ServiceSnapshot> snapshot() const;

  // Loads corpus, index, checkpoint, stats and report from the configured
  // paths and installs them. Reloads are serialized.
  void reload();

  HttpReply handle_verify(std::string_view body) const;
  HttpReply handle_health() const;
  HttpReply handle_stats() const;
  HttpReply handle_report() const;

  void mount(httplib::Server& server) const;

  const ServiceConfig& config() const { return config_; }

 private:
  ServiceConfig config_;
  std::string allowed_origin_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const ServiceSnapshot> snapshot_;
  std::mutex reload_mutex_;
  std::unique_ptr<std::counting_semaphore<>> slots_;
};

ServiceSnapshot load_snapshot(const ServiceConfig& config);

/// Owns an httplib::Server running on a background thread.
class HttpServer {
 public:
  explicit HttpServer(const VerifyService& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds (port 0 picks a free port) and starts serving; returns the port.
  int start(const std::string& host, int port);
  // Blocks the calling thread until stop().
  void wait();
  void stop();

 private:
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int threads_;
};

}  // namespace hifact
