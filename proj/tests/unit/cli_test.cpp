#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::initializer_list<std::string> args) {
  std::vector<std::string> owned{"hifact"};
  owned.insert(owned.end(), args);
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = hifact::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& leaf) const { return (path / leaf).string(); }
};

}  // namespace

TEST_CASE("cli: usage errors exit 1 with help on stderr") {
  const Run none = cli({});
  CHECK(none.code == 1);
  CHECK(none.err.find("Subcommands") != std::string::npos);
  const Run bogus = cli({"frobnicate"});
  CHECK(bogus.code == 1);
  CHECK(bogus.err.find("Usage") != std::string::npos);
  CHECK(cli({"split", "--corpus"}).code == 1);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("cli: data errors exit 2, missing files exit 3") {
  TempDir dir("hifact_cli_errors");
  REQUIRE(cli({"fixture", "--n", "20", "--out", dir / "c.jsonl"}).code == 0);
  CHECK(cli({"split", "--corpus", dir / "c.jsonl", "--ratios", "0.5,0.5,0.5", "--out", dir / "s"}).code == 2);
  std::ofstream(dir / "bad.jsonl") << "{oops\n";
  const Run bad = cli({"ingest", "--input", dir / "bad.jsonl"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("ParseError") != std::string::npos);
  CHECK(cli({"stats", "--corpus", dir / "missing.jsonl"}).code == 3);
}

TEST_CASE("cli: fixture, ingest and stats") {
  TempDir dir("hifact_cli_stats");
  REQUIRE(cli({"fixture", "--n", "100", "--weights", "0.4,0.3,0.2,0.1", "--out", dir / "c.jsonl"}).code == 0);
  CHECK(line_count(dir / "c.jsonl") == 100);
  const Run ingest = cli({"ingest", "--input", dir / "c.jsonl"});
  CHECK(ingest.code == 0);
  CHECK(ingest.out == slurp(dir / "c.jsonl"));
  const Run stats = cli({"stats", "--corpus", dir / "c.jsonl"});
  REQUIRE(stats.code == 0);
  const auto j = nlohmann::json::parse(stats.out);
  CHECK(j["label_histogram"]["true"] == 40);
  CHECK(j["label_histogram"]["unverified"] == 10);
}

TEST_CASE("cli: split writes 1050/150/300 line files for the 1500-record fixture") {
  TempDir dir("hifact_cli_split");
  REQUIRE(cli({"fixture", "--n", "1500", "--out", dir / "c.jsonl"}).code == 0);
  REQUIRE(cli({"split", "--corpus", dir / "c.jsonl", "--ratios", "0.7,0.1,0.2", "--seed", "7",
               "--out", dir / "splits"}).code == 0);
  CHECK(line_count(fs::path(dir / "splits") / "train.txt") == 1050);
  CHECK(line_count(fs::path(dir / "splits") / "val.txt") == 150);
  CHECK(line_count(fs::path(dir / "splits") / "test.txt") == 300);
}

TEST_CASE("cli: lifecycle is byte-for-byte repeatable; verify and ablate run") {
  TempDir dir("hifact_cli_lifecycle");
  std::string reports[2];
  for (int run = 0; run < 2; ++run) {
    const std::string tag = std::to_string(run);
    REQUIRE(cli({"fixture", "--n", "120", "--seed", "42", "--out", dir / ("c" + tag + ".jsonl")}).code == 0);
    REQUIRE(cli({"split", "--corpus", dir / ("c" + tag + ".jsonl"), "--seed", "42", "--out", dir / ("s" + tag)}).code == 0);
    REQUIRE(cli({"build-index", "--corpus", dir / ("c" + tag + ".jsonl"), "--out", dir / ("i" + tag + ".bin")}).code == 0);
    REQUIRE(cli({"train", "--corpus", dir / ("c" + tag + ".jsonl"), "--split", dir / ("s" + tag),
                 "--mode", "concat", "--hidden", "16", "--epochs", "5", "--lr", "0.05",
                 "--out", dir / ("m" + tag + ".ckpt")}).code == 0);
    REQUIRE(cli({"evaluate", "--corpus", dir / ("c" + tag + ".jsonl"), "--split", dir / ("s" + tag),
                 "--index", dir / ("i" + tag + ".bin"), "--checkpoint", dir / ("m" + tag + ".ckpt"),
                 "--out", dir / ("r" + tag + ".json")}).code == 0);
    reports[run] = slurp(dir / ("r" + tag + ".json"));
  }
  CHECK(reports[0] == reports[1]);
  CHECK(slurp(dir / "i0.bin") == slurp(dir / "i1.bin"));
  CHECK(slurp(dir / "m0.ckpt") == slurp(dir / "m1.ckpt"));
  const auto rep = nlohmann::json::parse(reports[0]);
  CHECK(rep["split"] == "test");

  const Run table = cli({"evaluate", "--corpus", dir / "c0.jsonl", "--split", dir / "s0", "--index",
                         dir / "i0.bin", "--checkpoint", dir / "m0.ckpt", "--table"});
  CHECK(table.code == 0);
  CHECK(table.out.find("Macro-F1") != std::string::npos);

  const Run verify = cli({"verify", "--claim", "sarkar ne kaha roads are ready", "--corpus", dir / "c0.jsonl",
                          "--index", dir / "i0.bin", "--checkpoint", dir / "m0.ckpt"});
  REQUIRE(verify.code == 0);
  CHECK(nlohmann::json::parse(verify.out).contains("explanation"));

  const Run ablate = cli({"ablate", "--corpus", dir / "c0.jsonl", "--split", dir / "s0", "--index",
                          dir / "i0.bin", "--checkpoint", dir / "m0.ckpt"});
  REQUIRE(ablate.code == 0);
  CHECK(nlohmann::json::parse(ablate.out).contains("accuracy_delta"));

  // Claim-only checkpoints cannot be ablated.
  REQUIRE(cli({"train", "--corpus", dir / "c0.jsonl", "--split", dir / "s0", "--hidden", "8", "--epochs", "2",
               "--out", dir / "claim.ckpt"}).code == 0);
  CHECK(cli({"ablate", "--corpus", dir / "c0.jsonl", "--split", dir / "s0", "--index", dir / "i0.bin",
             "--checkpoint", dir / "claim.ckpt"}).code == 2);
}
