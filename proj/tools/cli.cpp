#include "cli.hpp"

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hifact/error.hpp"
#include "hifact/pipeline.hpp"
#include "hifact/service.hpp"

namespace hifact {

namespace {

using nlohmann::ordered_json;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

struct ProviderOptions {
  std::string encoder = "reference";
  std::string generator = "reference";
  std::string encoder_url;
  std::string generator_url;
  int timeout_ms = 30000;
};

struct ArtifactPaths {
  std::string corpus;
  std::string split;
  std::string index;
  std::string checkpoint;
};

struct TrainOptions {
  std::string mode = "claim";
  double lr = TrainConfig{}.learning_rate;
  std::size_t batch = TrainConfig{}.batch_size;
  std::size_t epochs = TrainConfig{}.max_epochs;
  std::size_t patience = TrainConfig{}.patience;
  std::uint64_t seed = TrainConfig{}.seed;
  std::size_t hidden = TrainConfig{}.hidden_width;
};

void add_providers(CLI::App& cmd, ProviderOptions& p) {
  cmd.add_option("--encoder", p.encoder, "reference|remote")
      ->check(CLI::IsMember({"reference", "remote"}));
  cmd.add_option("--generator", p.generator, "reference|remote")
      ->check(CLI::IsMember({"reference", "remote"}));
  cmd.add_option("--encoder-url", p.encoder_url, "overrides HIFACT_ENCODER_URL");
  cmd.add_option("--generator-url", p.generator_url, "overrides HIFACT_GENERATOR_URL");
  cmd.add_option("--timeout-ms", p.timeout_ms, "remote request timeout")
      ->check(CLI::PositiveNumber);
}

EncoderConfig encoder_config(const ProviderOptions& p) {
  EncoderConfig c;
  c.remote_endpoint = p.encoder_url;
  c.timeout_ms = p.timeout_ms;
  return c;
}

GeneratorConfig generator_config(const ProviderOptions& p) {
  GeneratorConfig c;
  c.remote_endpoint = p.generator_url;
  c.timeout_ms = p.timeout_ms;
  return c;
}

std::shared_ptr<const EmbeddingProvider> encoder_of(const ProviderOptions& p) {
  return make_encoder(parse_provider_kind(p.encoder), encoder_config(p));
}

std::shared_ptr<const ExplanationGenerator> generator_of(const ProviderOptions& p) {
  return make_generator(parse_provider_kind(p.generator), generator_config(p));
}

// One JSON object per line on stderr.
class Progress {
 public:
  explicit Progress(std::ostream& err) : err_(err) {}
  void operator()(std::string_view event, ordered_json fields = ordered_json::object()) {
    ordered_json line;
    line["event"] = std::string(event);
    for (auto& [k, v] : fields.items()) line[k] = v;
    err_ << line.dump() << '\n';
    err_.flush();
  }

 private:
  std::ostream& err_;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  file << text;
  if (!file) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

std::string pretty(const ordered_json& j) { return j.dump(2) + "\n"; }

PipelineArtifacts load_for_eval(const Corpus& corpus, const ArtifactPaths& paths,
                                const ProviderOptions& p, PromptLabelSource source) {
  return load_artifacts(corpus, paths.index, paths.checkpoint, encoder_of(p), generator_of(p),
                        source);
}

int exit_code_for(const Error& e) {
  if (is_upstream_error(e.code())) return kExitRuntime;
  if (is_data_error(e.code()) || e.code() == ErrorCode::InvalidArgument ||
      e.code() == ErrorCode::ModeMismatch || e.code() == ErrorCode::UnknownSplit) {
    return kExitData;
  }
  return kExitRuntime;
}

HttpServer* g_server = nullptr;

extern "C" void stop_on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"hifact: code-mixed claim verification", "hifact"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hifact 1.0.0");
  Progress progress(err);

  ProviderOptions providers;
  ArtifactPaths paths;
  TrainOptions topt;
  std::string out_path;
  std::string which = "test";
  std::string prompt_source = "predicted";
  bool table = false;

  auto* ingest = app.add_subcommand("ingest", "validate a JSONL corpus and write it normalized");
  std::string input;
  ingest->add_option("--input", input, "raw JSONL corpus")->required();
  ingest->add_option("--out", out_path, "normalized corpus (default stdout)");

  auto* fixture = app.add_subcommand("fixture", "generate a synthetic labelled corpus");
  FixtureOptions fopt;
  std::vector<double> weights(fopt.label_weights.begin(), fopt.label_weights.end());
  fixture->add_option("--n", fopt.n, "number of records")->check(CLI::PositiveNumber);
  fixture->add_option("--seed", fopt.seed);
  fixture->add_option("--english-ratio", fopt.english_ratio_target)->check(CLI::Range(0.0, 1.0));
  fixture->add_option("--weights", weights, "four label weights")
      ->delimiter(',')
      ->expected(kNumLabels);
  fixture->add_option("--out", out_path, "corpus path (default stdout)");

  auto* stats = app.add_subcommand("stats", "corpus statistics as JSON");
  stats->add_option("--corpus", paths.corpus)->required();
  stats->add_option("--out", out_path);

  auto* split = app.add_subcommand("split", "stratified train/val/test split");
  std::string ratios = "0.7,0.1,0.2";
  std::uint64_t split_seed = 42;
  split->add_option("--corpus", paths.corpus)->required();
  split->add_option("--ratios", ratios, "train,val,test");
  split->add_option("--seed", split_seed);
  split->add_option("--out", out_path, "output directory")->required();

  auto* build_index = app.add_subcommand("build-index", "encode evidence into a flat index");
  build_index->add_option("--corpus", paths.corpus)->required();
  build_index->add_option("--out", out_path, "index file")->required();
  add_providers(*build_index, providers);

  auto* train_cmd = app.add_subcommand("train", "train the veracity classifier");
  std::string train_report_path;
  train_cmd->add_option("--corpus", paths.corpus)->required();
  train_cmd->add_option("--split", paths.split, "split directory")->required();
  train_cmd->add_option("--out", out_path, "checkpoint file")->required();
  train_cmd->add_option("--report", train_report_path, "training report JSON");
  train_cmd->add_option("--mode", topt.mode, "claim|concat")
      ->check(CLI::IsMember({"claim", "concat"}));
  train_cmd->add_option("--lr", topt.lr);
  train_cmd->add_option("--batch", topt.batch);
  train_cmd->add_option("--epochs", topt.epochs);
  train_cmd->add_option("--patience", topt.patience);
  train_cmd->add_option("--seed", topt.seed);
  train_cmd->add_option("--hidden", topt.hidden);
  add_providers(*train_cmd, providers);

  const auto add_eval_inputs = [&](CLI::App& cmd) {
    cmd.add_option("--corpus", paths.corpus)->required();
    cmd.add_option("--split", paths.split, "split directory")->required();
    cmd.add_option("--index", paths.index)->required();
    cmd.add_option("--checkpoint", paths.checkpoint)->required();
    cmd.add_option("--which", which, "train|val|test");
    cmd.add_option("--prompt-label", prompt_source, "predicted|gold")
        ->check(CLI::IsMember({"predicted", "gold"}));
    cmd.add_option("--out", out_path, "report JSON (default stdout)");
    cmd.add_flag("--table", table, "print an aligned text table instead of JSON");
    add_providers(cmd, providers);
  };
  auto* evaluate_cmd = app.add_subcommand("evaluate", "score a split");
  add_eval_inputs(*evaluate_cmd);
  auto* ablate = app.add_subcommand("ablate", "compare with and without retrieved evidence");
  add_eval_inputs(*ablate);

  auto* verify_cmd = app.add_subcommand("verify", "verify a single claim");
  std::string claim;
  verify_cmd->add_option("--claim", claim)->required();
  verify_cmd->add_option("--corpus", paths.corpus)->required();
  verify_cmd->add_option("--index", paths.index)->required();
  verify_cmd->add_option("--checkpoint", paths.checkpoint)->required();
  verify_cmd->add_option("--prompt-label", prompt_source)
      ->check(CLI::IsMember({"predicted", "gold"}));
  verify_cmd->add_option("--out", out_path);
  add_providers(*verify_cmd, providers);

  auto* serve = app.add_subcommand("serve", "run the HTTP API");
  ServiceConfig service;
  std::string report_path;
  serve->add_option("--host", service.host);
  serve->add_option("--port", service.port);
  serve->add_option("--corpus", paths.corpus)->required();
  serve->add_option("--split", paths.split);
  serve->add_option("--index", paths.index)->required();
  serve->add_option("--checkpoint", paths.checkpoint)->required();
  serve->add_option("--report", report_path, "EvalReport served at /api/report");
  serve->add_option("--max-in-flight", service.max_in_flight);
  serve->add_option("--request-timeout-ms", service.request_timeout_ms);
  serve->add_option("--allowed-origin", service.allowed_origin,
                    "CORS origin (default $HIFACT_ALLOWED_ORIGIN)");
  serve->add_option("--prompt-label", prompt_source)
      ->check(CLI::IsMember({"predicted", "gold"}));
  add_providers(*serve, providers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    if (e.get_exit_code() != 0) err << app.help();
    return kExitUsage;
  }

  try {
    if (ingest->parsed()) {
      const Corpus corpus = load_corpus(input);
      std::ostringstream buf;
      write_corpus(corpus, buf);
      emit(buf.str(), out_path, out);
      progress("ingest", {{"records", corpus.size()}});
    } else if (fixture->parsed()) {
      std::copy(weights.begin(), weights.end(), fopt.label_weights.begin());
      const Corpus corpus = generate_fixture(fopt);
      std::ostringstream buf;
      write_corpus(corpus, buf);
      emit(buf.str(), out_path, out);
      progress("fixture", {{"records", corpus.size()}, {"seed", fopt.seed}});
    } else if (stats->parsed()) {
      const Corpus corpus = load_corpus(paths.corpus);
      emit(pretty(to_json(corpus_stats(corpus, EnglishLexicon::builtin()))), out_path, out);
    } else if (split->parsed()) {
      const Corpus corpus = load_corpus(paths.corpus);
      const SplitAssignment s = stratified_split(corpus, parse_ratios(ratios), split_seed);
      save_split(s, out_path);
      progress("split", {{"train", s.train_ids.size()},
                         {"val", s.val_ids.size()},
                         {"test", s.test_ids.size()}});
    } else if (build_index->parsed()) {
      const Corpus corpus = load_corpus(paths.corpus);
      const auto encoder = encoder_of(providers);
      const EvidenceIndex built = build_evidence_index(corpus, *encoder);
      built.index.save(out_path);
      progress("build-index", {{"entries", built.index.size()}, {"dim", built.index.dim()}});
    } else if (train_cmd->parsed()) {
      const Corpus corpus = load_corpus(paths.corpus);
      const SplitAssignment s = load_split(paths.split, corpus);
      PipelineConfig config;
      config.input_mode = topt.mode == "concat" ? InputMode::ClaimEvidence : InputMode::ClaimOnly;
      config.train.learning_rate = topt.lr;
      config.train.batch_size = topt.batch;
      config.train.max_epochs = topt.epochs;
      config.train.patience = topt.patience;
      config.train.seed = topt.seed;
      config.train.hidden_width = topt.hidden;
      progress("train-start", {{"config", to_json(config)}});
      const PipelineArtifacts artifacts =
          build_artifacts(corpus, s, encoder_of(providers), generator_of(providers), config);
      checkpoint_save(artifacts.params, out_path);
      ordered_json report = to_json(*artifacts.train_report);
      if (!train_report_path.empty()) emit(pretty(report), train_report_path, out);
      progress("train-done", {{"epochs_run", artifacts.train_report->epochs_run},
                              {"best_epoch", artifacts.train_report->best_epoch},
                              {"val_macro_f1", artifacts.train_report->final_val_macro_f1}});
    } else if (evaluate_cmd->parsed() || ablate->parsed()) {
      const Corpus corpus = load_corpus(paths.corpus);
      const SplitAssignment s = load_split(paths.split, corpus);
      const PipelineArtifacts artifacts = load_for_eval(
          corpus, paths, providers, parse_prompt_label_source(prompt_source));
      const SplitName split_name = parse_split(which);
      if (evaluate_cmd->parsed()) {
        const EvalReport report = evaluate(artifacts, corpus, s, split_name);
        emit(table ? render_report_table({{"HiFACTMix", &report}}) : pretty(to_json(report)),
             out_path, out);
        progress("evaluate", {{"split", report.split}, {"n", report.n},
                              {"accuracy", report.accuracy}});
      } else {
        const AblationResult result = ablate_retrieval(artifacts, corpus, s, split_name);
        emit(table ? render_report_table({{"with retrieval", &result.with_retrieval},
                                          {"without retrieval", &result.without_retrieval}})
                   : pretty(to_json(result)),
             out_path, out);
        progress("ablate", {{"accuracy_delta", result.accuracy_delta}});
      }
    } else if (verify_cmd->parsed()) {
      const Corpus corpus = load_corpus(paths.corpus);
      const PipelineArtifacts artifacts = load_for_eval(
          corpus, paths, providers, parse_prompt_label_source(prompt_source));
      emit(pretty(to_json(verify(artifacts, claim))), out_path, out);
    } else if (serve->parsed()) {
      service.corpus_path = paths.corpus;
      service.split_dir = paths.split;
      service.index_path = paths.index;
      service.checkpoint_path = paths.checkpoint;
      service.report_path = report_path;
      service.encoder = parse_provider_kind(providers.encoder);
      service.generator = parse_provider_kind(providers.generator);
      service.encoder_config = encoder_config(providers);
      service.generator_config = generator_config(providers);
      service.prompt_label_source = parse_prompt_label_source(prompt_source);
      service.validate(true);
      VerifyService svc(service);
      HttpServer server(svc);
      const int port = server.start(service.host, service.port);
      progress("serve", {{"host", service.host}, {"port", port}, {"model_loaded", false}});
      svc.reload();
      progress("ready", {{"index_size", svc.snapshot()->artifacts->index.size()}});
      g_server = &server;
      std::signal(SIGINT, stop_on_signal);
      std::signal(SIGTERM, stop_on_signal);
      server.wait();
      g_server = nullptr;
    }
  } catch (const Error& e) {
    progress("error", {{"code", std::string(error_code_name(e.code()))}, {"message", e.what()}});
    return exit_code_for(e);
  } catch (const std::filesystem::filesystem_error& e) {
    progress("error", {{"code", "IoError"}, {"message", e.what()}});
    return kExitRuntime;
  } catch (const std::exception& e) {
    progress("error", {{"code", "internal"}, {"message", e.what()}});
    return kExitRuntime;
  }
  return 0;
}

}  // namespace hifact
