#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mutants.hpp"
#include "nftsim/chain_io.hpp"
#include "nftsim/cli.hpp"

namespace fs = std::filesystem;
using nft::cli::run_cli;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// Fresh scratch directory holding copies of the sample inputs.
struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("nftsim-cli-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::ofstream(dir / "net.jsonl")
        << "{\"id\":\"n1\",\"kind\":\"node\"}\n{\"id\":\"n2\",\"kind\":\"node\"}\n"
           "{\"deposit\":100,\"kind\":\"wallet\",\"node\":\"n1\",\"owner\":\"alice\"}\n"
           "{\"deposit\":50,\"kind\":\"wallet\",\"node\":\"n2\",\"owner\":\"bob\"}\n";
    std::ofstream(dir / "sched.jsonl")
        << "{\"asset\":\"a1\",\"op\":\"mint\",\"orig\":\"alice\",\"tick\":0}\n"
           "{\"asset\":\"a1\",\"cost\":40,\"new\":\"bob\",\"old\":\"alice\",\"op\":\"transfer\",\"tick\":1}\n";
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const char* name) const { return (dir / name).string(); }
};

}  // namespace

TEST_CASE("notice-table prints the method table") {
  auto r = cli({"notice-table"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "method   (a) (b) (c) (d)\n"
        "alpha    ✓   ✓   ✓   ✓\n"
        "beta     ✓   ✓   ✓   ✓\n"
        "gamma    ✓   ✗   ✗   ✓\n"
        "delta    ✗   ✗   ✗   ✗\n"
        "epsilon  ✓   ✓   ✓   ✓\n");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli({}).code == 2);
  auto r = cli({"frobnicate"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
  CHECK(cli({"serve-notice", "--method", "zeta"}).code == 2);
  CHECK(cli({"simulate", "--config", "x"}).code == 2);
  CHECK(cli({"verify", "--trace", "/nonexistent/trace"}).code == 2);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("serve-notice prints a profile") {
  auto gamma = cli({"serve-notice", "--method", "gamma", "--email-delivered", "false"});
  CHECK(gamma.code == 0);
  CHECK(gamma.out.find("gamma    ✓   ✗   ✗   ✓\n") != std::string::npos);
  auto eps = cli({"serve-notice", "--method", "epsilon"});
  CHECK(eps.out.find("epsilon  ✓   ✓   ✓   ✓\n") != std::string::npos);
  CHECK(eps.out.find("qualified") != std::string::npos);
}

TEST_CASE("simulate then verify a clean trace") {
  Scratch s;
  auto sim = cli({"simulate", "--config", s / "net.jsonl", "--schedule", s / "sched.jsonl", "--seed",
                  "5", "--out", s / "trace.jsonl", "--chain-out", s / "chain.jsonl"});
  CHECK(sim.code == 0);
  CHECK(sim.out.find("certified ownership: holds") != std::string::npos);
  auto v = cli({"verify", "--trace", s / "trace.jsonl"});
  CHECK(v.code == 0);
  CHECK(v.out.find("replay: identical") != std::string::npos);
  auto laws = cli({"check-laws", s / "chain.jsonl"});
  CHECK(laws.code == 0);
}

TEST_CASE("same inputs give byte-identical files") {
  Scratch s;
  std::vector<std::string> args{"simulate", "--config", s / "net.jsonl", "--schedule",
                                s / "sched.jsonl", "--seed", "9", "--ticks", "4"};
  auto first = args;
  first.insert(first.end(), {"--out", s / "t1.jsonl", "--chain-out", s / "c1.jsonl"});
  auto second = args;
  second.insert(second.end(), {"--out", s / "t2.jsonl", "--chain-out", s / "c2.jsonl"});
  auto r1 = cli(first);
  auto r2 = cli(second);
  CHECK(r1.out == r2.out);
  CHECK(slurp(s.dir / "t1.jsonl") == slurp(s.dir / "t2.jsonl"));
  CHECK(slurp(s.dir / "c1.jsonl") == slurp(s.dir / "c2.jsonl"));
  CHECK_FALSE(slurp(s.dir / "t1.jsonl").empty());
}

TEST_CASE("verify reports a tampered trace") {
  Scratch s;
  cli({"simulate", "--config", s / "net.jsonl", "--schedule", s / "sched.jsonl", "--out",
       s / "trace.jsonl"});
  auto text = slurp(s.dir / "trace.jsonl");
  auto pos = text.find("\"seed\":0");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 8, "\"seed\":1");
  std::ofstream(s.dir / "bad.jsonl", std::ios::binary) << text;
  auto r = cli({"verify", "--trace", s / "bad.jsonl"});
  CHECK(r.code == 1);
  CHECK(r.out.find("MISMATCH") != std::string::npos);
}

TEST_CASE("check-laws flags a forged chain") {
  Scratch s;
  auto m = mutants::all()[1];
  nft::ledger::save_chain_file(s / "forged.jsonl", m.history.snapshots.back());
  auto r = cli({"check-laws", s / "forged.jsonl"});
  CHECK(r.code == 1);
  CHECK(r.out.find("law2") != std::string::npos);
}
