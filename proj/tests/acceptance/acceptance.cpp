// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "cli.hpp"
#include "hifact/error.hpp"
#include "hifact/metrics.hpp"
#include "hifact/pipeline.hpp"
#include "hifact/rng.hpp"
#include "hifact/service.hpp"
#include "oracles.hpp"
#include "schema_check.hpp"
#include "stub_server.hpp"

namespace fs = std::filesystem;
using namespace hifact;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

// Collects failures for one criterion; the first few are echoed in the line.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      std::ostringstream s;
      s.precision(17);
      s << what << ": got " << got << " want " << want;
      failures.push_back(s.str());
    }
  }
};

int g_failed = 0;

void report(const std::string& name, const Check& c, const std::string& detail) {
  const bool ok = c.failures.empty();
  if (!ok) ++g_failed;
  std::printf("%s  %-34s %s", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  for (std::size_t i = 0; i < c.failures.size() && i < 3; ++i)
    std::printf("%s%s", i == 0 ? " | " : "; ", c.failures[i].c_str());
  if (c.failures.size() > 3) std::printf("; (+%zu more)", c.failures.size() - 3);
  std::printf("\n");
  std::fflush(stdout);
}

void run(const std::string& name, const std::function<std::string(Check&)>& body) {
  Check c;
  std::string detail;
  try {
    detail = body(c);
  } catch (const std::exception& e) {
    c.failures.push_back(std::string("exception: ") + e.what());
  }
  report(name, c, detail);
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::vector<std::string> random_tokens(SplitMix64& rng, std::size_t max_len, std::size_t vocab,
                                       std::size_t min_len = 0) {
  std::vector<std::string> out(min_len + rng.below(max_len - min_len + 1));
  for (auto& t : out) t = std::string(1, static_cast<char>('a' + rng.below(vocab)));
  return out;
}

std::string join(const std::vector<std::string>& toks) {
  std::string s;
  for (const auto& t : toks) s += (s.empty() ? "" : " ") + t;
  return s;
}

double gauss(SplitMix64& rng) {
  const double u1 = 1.0 - rng.uniform01(), u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hifact");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hifact_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// ---------------------------------------------------------------------------

std::string metric_oracles(Check& c) {
  const auto t0 = Clock::now();
  using L = VeracityLabel;
  const double tol = 1e-9;

  // Worked examples.
  c.near(accuracy(std::vector<L>{L::True, L::False, L::True, L::Unverified},
                  std::vector<L>{L::True, L::False, L::True, L::True}),
         0.75, tol, "accuracy 3/4");
  const MacroF1 m = macro_f1(std::vector<L>{L::True, L::True, L::False, L::Unverified},
                             std::vector<L>{L::True, L::False, L::False, L::Unverified});
  c.near(m.macro, 7.0 / 9.0, tol, "macro-F1 7/9");
  const RougeScore r = rouge_l("a b c d e", "a c e");
  c.near(r.precision, 0.6, tol, "ROUGE-L P");
  c.near(r.recall, 1.0, tol, "ROUGE-L R");
  c.near(r.f1, 0.75, tol, "ROUGE-L F1");
  c.near(bleu("a b c d", "a b c e", {2, 0.0}), std::sqrt(0.5), tol, "BLEU max_n=2");
  c.near(bleu("a b c d", "a b c e", {4, 0.0}), 0.0, tol, "BLEU max_n=4");
  c.near(bleu("a b c d e", "a b c d e"), 1.0, tol, "BLEU identity");

  // Randomized cases against independent computations.
  SplitMix64 rng(20240601);
  const int cases = 50;
  for (int i = 0; i < cases; ++i) {
    const std::size_t n = 1 + rng.below(25);
    std::vector<L> g(n), p(n);
    std::vector<int> gi(n), pi(n);
    std::size_t same = 0;
    for (std::size_t k = 0; k < n; ++k) {
      gi[k] = static_cast<int>(rng.below(4));
      pi[k] = static_cast<int>(rng.below(4));
      g[k] = label_from_code(gi[k]);
      p[k] = label_from_code(pi[k]);
      same += gi[k] == pi[k];
    }
    c.near(accuracy(g, p), static_cast<double>(same) / static_cast<double>(n), tol, "accuracy random");
    c.near(macro_f1(g, p).macro, oracle::macro_f1_counts(gi, pi), tol, "macro-F1 random");

    const auto cand = random_tokens(rng, 9, 4, 1);
    const auto ref = random_tokens(rng, 9, 4, 1);
    const double l = static_cast<double>(oracle::lcs_brute(cand, ref));
    const double rp = l / static_cast<double>(cand.size());
    const double rr = l / static_cast<double>(ref.size());
    const double rf = l == 0 ? 0.0 : 2 * rp * rr / (rp + rr);
    const RougeScore got = rouge_l(join(cand), join(ref));
    c.near(got.precision, rp, tol, "ROUGE-L P random");
    c.near(got.recall, rr, tol, "ROUGE-L R random");
    c.near(got.f1, rf, tol, "ROUGE-L F1 random");

    for (std::size_t max_n : {1, 2, 3}) {
      c.near(bleu(join(cand), join(ref), {max_n, 0.0}), oracle::bleu_naive(cand, ref, max_n), tol,
             "BLEU random");
    }
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 5.0, "runtime >= 5 s");
  return fmt("worked examples + %.0f random cases/metric, tol 1e-9, %.2fs", cases, secs);
}

std::string lcs_equivalence(Check& c) {
  SplitMix64 rng(77);
  int pairs = 0;
  for (; pairs < 200; ++pairs) {
    const auto a = random_tokens(rng, 8, 3);
    const auto b = random_tokens(rng, 8, 3);
    const std::size_t dp = lcs_length(a, b);
    const std::size_t brute = oracle::lcs_brute(a, b);
    c.expect(dp == brute, "pair " + std::to_string(pairs) + ": dp " + std::to_string(dp) +
                              " vs enumeration " + std::to_string(brute));
  }
  return fmt("%.0f random pairs, length <= 8, exact match", pairs);
}

std::string index_oracle(Check& c) {
  const auto t0 = Clock::now();
  SplitMix64 rng(31337);
  FlatIndex idx(768);
  std::vector<std::vector<float>> rows;
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> v(768);
    for (auto& x : v) x = gauss(rng);
    idx.add("e" + std::to_string(i), v);
    rows.emplace_back(v.begin(), v.end());
  }
  double worst = 0.0;
  for (int q = 0; q < 50; ++q) {
    std::vector<double> query(768);
    for (auto& x : query) x = gauss(rng);
    for (std::size_t k : {1, 5, 10}) {
      const auto want = oracle::knn_scan(rows, query, k);
      const auto got = idx.search(query, k);
      c.expect(got.size() == want.size(), "hit count");
      for (std::size_t i = 0; i < std::min(got.size(), want.size()); ++i) {
        c.expect(got[i].evidence_id == "e" + std::to_string(want[i].first), "id/order mismatch");
        worst = std::max(worst, std::abs(got[i].distance - want[i].second));
        c.expect(got[i].rank == i, "rank");
      }
    }
  }
  c.expect(worst <= 1e-9, "distance error " + std::to_string(worst));
  const double secs = seconds_since(t0);
  c.expect(secs < 10.0, "runtime >= 10 s");
  return fmt("1000x768, 50 queries, k in {1,5,10}, max |dd| %.1e, %.2fs", worst, secs);
}

std::string gradient_check(Check& c) {
  double worst = 0.0;
  const double eps = 1e-5;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SplitMix64 rng(seed * 7919);
    MLPParams p = init_params(8, seed);
    for (auto& b : p.b1) b = rng.uniform(-0.1, 0.1);
    for (auto& b : p.b2) b = rng.uniform(-0.1, 0.1);
    std::vector<TrainingExample> batch(4);
    for (auto& ex : batch) {
      ex.features.resize(768);
      for (auto& x : ex.features) x = rng.uniform(-1.0, 1.0);
      ex.label = label_from_code(static_cast<int>(rng.below(4)));
    }
    const MLPParams g = loss_and_grad(p, batch).grad;
    const auto probe = [&](std::vector<double> MLPParams::*field, const std::vector<double>& grad) {
      for (std::size_t i = 0; i < (p.*field).size(); ++i) {
        const double keep = (p.*field)[i];
        (p.*field)[i] = keep + eps;
        const double up = loss_and_grad(p, batch).loss;
        (p.*field)[i] = keep - eps;
        const double down = loss_and_grad(p, batch).loss;
        (p.*field)[i] = keep;
        const double fd = (up - down) / (2 * eps);
        const double scale = std::max({std::abs(fd), std::abs(grad[i]), 1e-7});
        worst = std::max(worst, std::abs(fd - grad[i]) / scale);
      }
    };
    probe(&MLPParams::w1, g.w1);
    probe(&MLPParams::b1, g.b1);
    probe(&MLPParams::w2, g.w2);
    probe(&MLPParams::b2, g.b2);
  }
  c.expect(worst < 1e-4, "max relative error " + std::to_string(worst));
  return fmt("H=8, 768-d input, 10 seeds, eps 1e-5, max rel err %.2e (< 1e-4)", worst);
}

std::string training_sanity(Check& c) {
  const auto t0 = Clock::now();
  SplitMix64 rng(2024);
  std::vector<std::vector<double>> centers(kNumLabels, std::vector<double>(768));
  for (auto& ctr : centers) {
    double n2 = 0.0;
    for (auto& v : ctr) {
      v = gauss(rng);
      n2 += v * v;
    }
    for (auto& v : ctr) v *= 2.0 / std::sqrt(n2);
  }
  const auto draw = [&](int per_class) {
    std::vector<TrainingExample> out;
    for (std::size_t k = 0; k < kNumLabels; ++k)
      for (int i = 0; i < per_class; ++i) {
        TrainingExample ex;
        ex.features.resize(768);
        for (std::size_t d = 0; d < 768; ++d) ex.features[d] = centers[k][d] + 0.05 * gauss(rng);
        ex.label = label_from_code(static_cast<int>(k));
        out.push_back(std::move(ex));
      }
    return out;
  };
  const auto train_set = draw(200);
  const auto val_set = draw(50);
  const TrainConfig cfg;  // defaults: H=256, lr 1e-3, batch 32, 50 epochs
  const TrainResult r = train(train_set, val_set, cfg);
  std::size_t correct = 0;
  for (const auto& ex : val_set) correct += predict(r.params, ex.features).label == ex.label;
  const double acc = static_cast<double>(correct) / static_cast<double>(val_set.size());
  const double secs = seconds_since(t0);
  c.expect(acc >= 0.95, "validation accuracy " + std::to_string(acc));
  c.expect(r.report.epochs_run <= 50, "more than 50 epochs");
  c.expect(secs < 60.0, "runtime >= 60 s");
  return fmt("4 clusters x 200/class, val acc %.4f after %.0f epochs, %.1fs", acc,
             static_cast<double>(r.report.epochs_run), secs);
}

std::string split_arithmetic(Check& c) {
  const Corpus corpus = generate_fixture({});
  const SplitAssignment s = stratified_split(corpus, {0.7, 0.1, 0.2}, 7);
  c.expect(s.train_ids.size() == 1050, "train " + std::to_string(s.train_ids.size()));
  c.expect(s.val_ids.size() == 150, "val " + std::to_string(s.val_ids.size()));
  c.expect(s.test_ids.size() == 300, "test " + std::to_string(s.test_ids.size()));
  std::map<std::string, std::size_t> label_of;
  std::array<double, kNumLabels> totals{};
  for (const auto& r : corpus.records) {
    label_of[r.claim.id] = static_cast<std::size_t>(label_code(r.label));
    totals[label_of[r.claim.id]] += 1;
  }
  const double ratios[] = {0.7, 0.1, 0.2};
  double worst = 0.0;
  for (SplitName w : {SplitName::Train, SplitName::Val, SplitName::Test}) {
    std::array<double, kNumLabels> got{};
    for (const auto& id : s.ids(w)) got[label_of.at(id)] += 1;
    for (std::size_t l = 0; l < kNumLabels; ++l)
      worst = std::max(worst, std::abs(got[l] - ratios[static_cast<int>(w)] * totals[l]));
  }
  c.expect(worst <= 1.0, "per-label deviation " + std::to_string(worst));

  // The CLI writes the same counts as line-per-id files.
  const fs::path dir = scratch("split");
  c.expect(cli({"fixture", "--n", "1500", "--out", (dir / "c.jsonl").string()}) == 0, "fixture cli");
  c.expect(cli({"split", "--corpus", (dir / "c.jsonl").string(), "--ratios", "0.7,0.1,0.2", "--seed",
                "7", "--out", (dir / "splits").string()}) == 0,
           "split cli");
  std::size_t lines[3] = {0, 0, 0};
  const char* names[] = {"train.txt", "val.txt", "test.txt"};
  for (int i = 0; i < 3; ++i) {
    std::ifstream in(dir / "splits" / names[i]);
    for (std::string line; std::getline(in, line);) ++lines[i];
  }
  c.expect(lines[0] == 1050 && lines[1] == 150 && lines[2] == 300, "CLI split file line counts");
  fs::remove_all(dir);
  return fmt("1500 records -> %.0f/%.0f/%.0f", static_cast<double>(s.train_ids.size()),
             static_cast<double>(s.val_ids.size()), static_cast<double>(s.test_ids.size())) +
         fmt(", max per-label deviation %.2f", worst);
}

std::string end_to_end_determinism(Check& c) {
  const auto t0 = Clock::now();
  const fs::path dir = scratch("e2e");
  std::string reports[2];
  for (int run = 0; run < 2; ++run) {
    const fs::path d = dir / ("run" + std::to_string(run));
    fs::create_directories(d);
    const auto p = [&](const char* leaf) { return (d / leaf).string(); };
    c.expect(cli({"fixture", "--n", "1500", "--seed", "42", "--out", p("corpus.jsonl")}) == 0, "fixture");
    c.expect(cli({"split", "--corpus", p("corpus.jsonl"), "--seed", "42", "--out", p("splits")}) == 0, "split");
    c.expect(cli({"build-index", "--corpus", p("corpus.jsonl"), "--out", p("index.bin")}) == 0, "build-index");
    c.expect(cli({"train", "--corpus", p("corpus.jsonl"), "--split", p("splits"), "--seed", "42", "--out",
                  p("model.ckpt")}) == 0,
             "train");
    c.expect(cli({"evaluate", "--corpus", p("corpus.jsonl"), "--split", p("splits"), "--index",
                  p("index.bin"), "--checkpoint", p("model.ckpt"), "--out", p("report.json")}) == 0,
             "evaluate");
    reports[run] = slurp(d / "report.json");
  }
  c.expect(!reports[0].empty(), "empty report");
  c.expect(reports[0] == reports[1], "EvalReport JSON differs between runs");
  c.expect(slurp(dir / "run0/index.bin") == slurp(dir / "run1/index.bin"), "index bytes differ");
  c.expect(slurp(dir / "run0/model.ckpt") == slurp(dir / "run1/model.ckpt"), "checkpoint bytes differ");
  fs::remove_all(dir);
  return fmt("2 runs, %.0f-byte report identical, %.1fs (this platform only)",
             static_cast<double>(reports[0].size()), seconds_since(t0));
}

std::string persistence(Check& c) {
  const fs::path dir = scratch("persist");
  SplitMix64 rng(99);
  FlatIndex idx(768);
  for (int i = 0; i < 300; ++i) {
    std::vector<double> v(768);
    for (auto& x : v) x = gauss(rng);
    idx.add("doc-" + std::to_string(i), v);
  }
  idx.save((dir / "index.bin").string());
  const FlatIndex idx2 = FlatIndex::load((dir / "index.bin").string());
  int index_probes = 0;
  for (; index_probes < 20; ++index_probes) {
    std::vector<double> q(768);
    for (auto& x : q) x = gauss(rng);
    c.expect(idx.search(q, 10) == idx2.search(q, 10), "index search differs after reload");
  }

  const MLPParams params = init_params(64, 5, 1536);
  checkpoint_save(params, (dir / "model.ckpt").string());
  const MLPParams params2 = checkpoint_load((dir / "model.ckpt").string());
  c.expect(params == params2, "parameters differ after reload");
  int ckpt_probes = 0;
  for (; ckpt_probes < 20; ++ckpt_probes) {
    std::vector<double> x(1536);
    for (auto& v : x) v = gauss(rng);
    const Prediction a = predict(params, x), b = predict(params2, x);
    c.expect(a.label == b.label && a.probabilities == b.probabilities, "prediction differs after reload");
  }
  fs::remove_all(dir);
  return fmt("index %.0f probes, checkpoint %.0f probes, bit-exact", index_probes, ckpt_probes);
}

std::string api_contract(Check& c) {
  const Corpus corpus = generate_fixture({200, {0.25, 0.25, 0.25, 0.25}, 0.55, 42});
  const SplitAssignment split = stratified_split(corpus, {0.7, 0.1, 0.2}, 42);
  PipelineConfig cfg;
  cfg.train.hidden_width = 32;
  cfg.train.max_epochs = 10;
  auto artifacts = std::make_shared<const PipelineArtifacts>(build_artifacts(
      corpus, split, std::make_shared<ReferenceEncoder>(), std::make_shared<ReferenceGenerator>(), cfg));
  std::ifstream schema_in(std::string(HIFACT_DOCS_DIR) + "/verify_response.schema.json");
  const nlohmann::json schema = nlohmann::json::parse(schema_in);

  VerifyService svc(ServiceConfig{});
  HttpServer server(svc);
  const int port = server.start("127.0.0.1", 0);
  httplib::Client client("127.0.0.1", port);
  const auto post = [&](httplib::Client& cl, const std::string& body) {
    return cl.Post("/api/verify", body, "application/json");
  };
  const auto error_code = [](const httplib::Result& r) -> std::string {
    if (!r) return "<no response>";
    try {
      return nlohmann::json::parse(r->body).at("error").get<std::string>();
    } catch (...) {
      return "<non-JSON body>";
    }
  };

  // Before artifacts are installed.
  auto h = client.Get("/api/health");
  c.expect(h && nlohmann::json::parse(h->body)["model_loaded"] == false, "health before load");
  auto early = post(client, R"({"claim":"sarkar ne kaha"})");
  c.expect(early && early->status == 503 && error_code(early) == "artifacts_not_loaded", "503 before load");

  ServiceSnapshot snap;
  snap.artifacts = artifacts;
  svc.install(snap);
  h = client.Get("/api/health");
  c.expect(h && h->status == 200, "health status");
  if (h) {
    const auto hj = nlohmann::json::parse(h->body);
    c.expect(hj["status"] == "ok" && hj["model_loaded"] == true &&
                 hj["index_size"] == artifacts->index.size(),
             "health body");
  }

  // Error paths.
  auto empty = post(client, "{}");
  c.expect(empty && empty->status == 400 && error_code(empty) == "empty_claim", "{} -> 400 empty_claim");
  auto blank = post(client, R"({"claim":"  "})");
  c.expect(blank && blank->status == 400 && error_code(blank) == "empty_claim", "blank -> 400");
  auto junk = post(client, "not json");
  c.expect(junk && junk->status == 400 && error_code(junk) != "<non-JSON body>", "malformed -> 400 JSON");
  auto missing = client.Get("/api/missing");
  c.expect(missing && missing->status == 404 && error_code(missing) == "not_found", "404 JSON body");
  auto no_stats = client.Get("/api/stats");
  c.expect(no_stats && no_stats->status == 404 && error_code(no_stats) != "<non-JSON body>", "stats 404 JSON");
  {
    testing::StubServer failing([](const httplib::Request&, httplib::Response& res) {
      res.status = 500;
      res.set_content("encoder down", "text/plain");
    });
    EncoderConfig ec;
    ec.remote_endpoint = failing.url("/embed");
    PipelineArtifacts remote = *artifacts;
    remote.encoder = std::make_shared<RemoteEncoder>(ec);
    VerifyService upstream_svc(ServiceConfig{});
    ServiceSnapshot s2;
    s2.artifacts = std::make_shared<const PipelineArtifacts>(std::move(remote));
    upstream_svc.install(s2);
    HttpServer upstream_server(upstream_svc);
    httplib::Client uc("127.0.0.1", upstream_server.start("127.0.0.1", 0));
    auto r = post(uc, R"({"claim":"sarkar ne kaha"})");
    c.expect(r && r->status == 502 && error_code(r) == "upstream", "remote 500 -> 502 upstream");
  }

  // Schema plus field-for-field equality with in-process verify, serially.
  std::vector<std::string> claims;
  for (std::size_t i = 0; i < 64; ++i) claims.push_back(corpus.records[i * 3].claim.text);
  std::vector<nlohmann::json> serial;
  std::size_t schema_bad = 0, mismatched = 0;
  for (const auto& claim : claims) {
    auto r = post(client, nlohmann::json{{"claim", claim}}.dump());
    if (!r || r->status != 200) {
      c.expect(false, "verify status");
      serial.emplace_back(nullptr);
      continue;
    }
    nlohmann::json body = nlohmann::json::parse(r->body);
    schema_bad += !testing::schema_violations(body, schema).empty();
    body.erase("latency_ms");
    const nlohmann::json expected = nlohmann::json::parse(to_json(verify(*artifacts, claim)).dump());
    mismatched += body != expected;
    serial.push_back(body);
  }
  c.expect(schema_bad == 0, std::to_string(schema_bad) + " responses violate the schema");
  c.expect(mismatched == 0, std::to_string(mismatched) + " responses differ from in-process verify");

  // 16 concurrent clients must reproduce the serial answers.
  std::vector<std::future<std::size_t>> workers;
  for (std::size_t w = 0; w < 16; ++w) {
    workers.push_back(std::async(std::launch::async, [&, w] {
      httplib::Client cl("127.0.0.1", port);
      std::size_t diffs = 0;
      for (std::size_t i = w; i < claims.size(); i += 16) {
        auto r = post(cl, nlohmann::json{{"claim", claims[i]}}.dump());
        if (!r || r->status != 200) {
          ++diffs;
          continue;
        }
        nlohmann::json body = nlohmann::json::parse(r->body);
        body.erase("latency_ms");
        diffs += body != serial[i];
      }
      return diffs;
    }));
  }
  std::size_t concurrent_diffs = 0;
  for (auto& f : workers) concurrent_diffs += f.get();
  c.expect(concurrent_diffs == 0, std::to_string(concurrent_diffs) + " concurrent responses differ");
  server.stop();
  return fmt("%.0f claims: schema-valid, equal to in-process, 16-way concurrent == serial; 400/404/502/503 checked",
             static_cast<double>(claims.size()));
}

std::string ablation_sign(Check& c) {
  const Corpus corpus = generate_fixture({});
  const SplitAssignment split = stratified_split(corpus, {0.7, 0.1, 0.2}, 42);
  PipelineConfig cfg;
  cfg.input_mode = InputMode::ClaimEvidence;
  cfg.train.learning_rate = 0.05;
  const PipelineArtifacts artifacts = build_artifacts(
      corpus, split, std::make_shared<ReferenceEncoder>(), std::make_shared<ReferenceGenerator>(), cfg);
  const AblationResult r = ablate_retrieval(artifacts, corpus, split, SplitName::Test);
  c.expect(r.with_retrieval.accuracy >= r.without_retrieval.accuracy, "with < without");
  return fmt("test acc with %.4f, without %.4f, delta %+.4f", r.with_retrieval.accuracy,
             r.without_retrieval.accuracy, r.accuracy_delta);
}

}  // namespace

int main() {
  run("metric oracle suite", metric_oracles);
  run("LCS brute-force equivalence", lcs_equivalence);
  run("index oracle", index_oracle);
  run("gradient check", gradient_check);
  run("training sanity", training_sanity);
  run("split arithmetic", split_arithmetic);
  run("end-to-end determinism", end_to_end_determinism);
  run("persistence round-trips", persistence);
  run("API contract", api_contract);
  run("ablation sign", ablation_sign);
  std::printf("%s: %d criteria failed\n", g_failed == 0 ? "ACCEPTED" : "REJECTED", g_failed);
  return g_failed == 0 ? 0 : 1;
}
