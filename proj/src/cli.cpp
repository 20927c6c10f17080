#include "nftsim/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>

#include "nftsim/chain_io.hpp"
#include "nftsim/laws.hpp"
#include "nftsim/netsim.hpp"
#include "nftsim/notice.hpp"
#include "nftsim/trace_io.hpp"

namespace nft::cli {

namespace {

struct Counts {
  std::size_t applied = 0;
  std::size_t rejected = 0;
  std::size_t idle = 0;
};

Counts count(const std::vector<sim::TraceEntry>& entries) {
  Counts c;
  for (const auto& e : entries) {
    switch (e.event.outcome) {
      case sim::Outcome::Applied: ++c.applied; break;
      case sim::Outcome::Rejected: ++c.rejected; break;
      case sim::Outcome::Idle: ++c.idle; break;
    }
  }
  return c;
}

// Prints the six law reports and the theorem check; returns true if all hold.
bool report_checks(const sim::Trace& trace, std::ostream& out) {
  bool ok = true;
  auto laws = laws::check_all(laws::history_of(trace.final_state.chain));
  laws::write_report(out, laws);
  for (const auto& r : laws) {
    out << "law" << r.law << ": " << (r.holds() ? "holds" : "VIOLATED") << '\n';
    ok = ok && r.holds();
  }
  auto thm = sim::verify_theorem1(trace);
  for (const auto& f : thm.failures) out << "certified ownership: " << f << '\n';
  out << "certified ownership: " << (thm.holds ? "holds" : "FAILS") << '\n';
  return ok && thm.holds;
}

void summarize(const sim::Trace& trace, std::ostream& out) {
  auto c = count(trace.entries);
  std::uint64_t digest = trace.entries.empty() ? 0 : trace.entries.back().digest;
  out << "ticks: " << trace.entries.size() << " (applied " << c.applied << ", rejected "
      << c.rejected << ", idle " << c.idle << ")\n";
  out << "chain height: " << trace.final_state.chain.height() << '\n';
  out << "digest: " << sim::hex64(digest) << '\n';
}

int simulate(const std::string& config_path, const std::string& schedule_path,
             std::optional<std::uint64_t> seed, const std::string& out_path,
             const std::string& chain_path, ledger::Tick ticks, std::ostream& out) {
  auto cfg = sim::load_config_file(config_path);
  if (seed) cfg.seed = *seed;
  auto schedule = sim::load_schedule_file(schedule_path, cfg.royalty);
  sim::Trace trace = sim::run(sim::init(cfg), schedule, ticks);
  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ledger::FormatError("cannot write " + out_path);
    sim::save_trace(f, trace);
  }
  if (!chain_path.empty()) ledger::save_chain_file(chain_path, trace.final_state.chain);
  summarize(trace, out);
  return report_checks(trace, out) ? kOk : kViolation;
}

int verify(const std::string& trace_path, std::ostream& out, std::ostream& err) {
  auto file = sim::load_trace_file(trace_path);
  sim::Trace trace;
  try {
    trace = sim::replay_trace(file);
  } catch (const sim::ReplayMismatch& e) {
    err << "replay: " << e.what() << '\n';
    out << "replay: MISMATCH\n";
    return kViolation;
  }
  out << "replay: identical\n";
  summarize(trace, out);
  return report_checks(trace, out) ? kOk : kViolation;
}

int check_laws(const std::string& chain_path, std::ostream& out) {
  auto chain = ledger::load_chain_file(chain_path);
  auto reports = laws::check_all(laws::history_of(chain));
  laws::write_report(out, reports);
  bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.holds(); });
  out << (ok ? "all six laws hold" : "violations found") << " over " << chain.height()
      << " blocks\n";
  return ok ? kOk : kViolation;
}

int serve_notice(const std::string& method_name, bool delivered, std::ostream& out) {
  auto method = notice::method_from_name(method_name);
  auto s = notice::default_scenario(*method);
  s.email_delivered = delivered;
  auto trace = notice::serve(s);
  for (const auto& e : trace.events) out << "  " << e << '\n';
  auto p = notice::evaluate_properties(trace, s);
  out << "method   (a) (b) (c) (d)\n" << notice::format_profile(*method, p);
  for (const auto& q : p.qualifications) out << "qualified " << q << '\n';
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"NFT ownership and knowledge simulator", "nftsim"};
  app.require_subcommand(1);

  std::string config_path, schedule_path, out_path, chain_out, trace_path, chain_path;
  std::optional<std::uint64_t> seed;
  ledger::Tick ticks = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "run a schedule on a configured network");
  sim_cmd->add_option("--config", config_path, "network config file")->required();
  sim_cmd->add_option("--schedule", schedule_path, "request schedule file")->required();
  sim_cmd->add_option("--seed", seed, "overrides the config seed");
  sim_cmd->add_option("--out", out_path, "write the trace here");
  sim_cmd->add_option("--chain-out", chain_out, "write the final chain here");
  sim_cmd->add_option("--ticks", ticks, "run at least this many ticks");

  auto* verify_cmd = app.add_subcommand("verify", "replay a trace and check laws and theorem");
  verify_cmd->add_option("--trace", trace_path, "trace file")->required();

  auto* laws_cmd = app.add_subcommand("check-laws", "check the ownership laws over a chain file");
  laws_cmd->add_option("chainfile", chain_path, "chain file")->required();

  std::string method;
  bool delivered = true;
  auto* serve_cmd = app.add_subcommand("serve-notice", "serve a notice and evaluate (a)-(d)");
  serve_cmd->add_option("--method", method, "alpha|beta|gamma|delta|epsilon")
      ->required()
      ->check(CLI::IsMember({"alpha", "beta", "gamma", "delta", "epsilon"}));
  serve_cmd->add_option("--email-delivered", delivered, "gamma only");

  auto* table_cmd = app.add_subcommand("notice-table", "print the method/property table");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    auto chosen = app.get_subcommands();
    out << (chosen.empty() ? app.help() : chosen.front()->help());
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run with --help for usage\n";
    return kUsage;
  }

  try {
    if (*sim_cmd) return simulate(config_path, schedule_path, seed, out_path, chain_out, ticks, out);
    if (*verify_cmd) return verify(trace_path, out, err);
    if (*laws_cmd) return check_laws(chain_path, out);
    if (*serve_cmd) return serve_notice(method, delivered, out);
    if (*table_cmd) {
      out << notice::format_table(notice::method_table());
      return kOk;
    }
  } catch (const std::exception& e) {
    // Bad files, bad configs and bad schedules are all input errors.
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace nft::cli
