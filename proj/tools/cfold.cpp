// cfold: scenario runner, fuzzer, benchmark and dump tool.
//
// Exit codes: 0 pass, 1 expectation or invariant failure, 2 usage, parse or
// runtime error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "chronofold.hpp"

namespace cf = chronofold;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int cmd_run(const std::string& path) {
  auto src = read_file(path);
  if (!src) {
    std::cerr << "cfold: cannot read " << path << '\n';
    return kUsage;
  }
  cf::Scenario sc;
  try {
    sc = cf::parse_scenario(*src);
  } catch (const cf::ParseError& e) {
    std::cerr << path << ": " << e.what() << '\n';
    return kUsage;
  }
  const auto t = cf::run_script(sc);
  std::cout << cf::format_transcript(t);
  if (t.has_error()) return kUsage;
  return t.passed() ? kPass : kFail;
}

int cmd_fuzz(std::uint64_t seed, std::size_t replicas, std::size_t ops, std::size_t cases,
             bool prefixes) {
  std::size_t failed = 0;
  for (std::size_t i = 0; i < cases; ++i) {
    cf::FuzzConfig cfg;
    cfg.seed = seed + i;
    cfg.replicas = replicas;
    cfg.ops = ops;
    cfg.check_prefixes = prefixes;
    const auto report = cf::fuzz(cfg);
    std::cout << cf::format_report(report);
    failed += !report.passed;
  }
  if (cases > 1) std::cout << cases - failed << '/' << cases << " cases passed\n";
  return failed == 0 ? kPass : kFail;
}

struct Timing {
  std::string name;
  std::size_t ops = 0;
  double ns = 0;
  std::size_t peak_entries = 0;
};

template <typename F>
Timing timed(std::string name, std::size_t ops, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  std::size_t peak = body();
  const auto stop = std::chrono::steady_clock::now();
  return {std::move(name), ops,
          static_cast<double>(std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count()),
          peak};
}

int cmd_bench(std::size_t n) {
  const cf::Author typist("typist");
  const cf::Author editor("editor");
  const cf::Author reader("reader");
  auto letter = [](std::size_t i) { return static_cast<char32_t>(U'a' + i % 26); };

  cf::Document typed = cf::new_document(typist);
  std::vector<Timing> results;
  results.push_back(timed("sequential-typing", n, [&] {
    for (std::size_t i = 0; i < n; ++i) typed.local_insert(typed.length(), letter(i));
    return static_cast<std::size_t>(typed.length());
  }));

  // Type a second run of n chars starting in the middle of the first.
  cf::Replica mid{cf::Document(editor)};
  cf::sync(cf::Replica{typed}, mid);
  results.push_back(timed("mid-document-insert", n, [&] {
    cf::LogIndex anchor = 1 + static_cast<cf::LogIndex>(n / 2);
    for (std::size_t i = 0; i < n; ++i) {
      mid.doc.local_insert(anchor, letter(i));
      anchor = mid.doc.length();
    }
    return static_cast<std::size_t>(mid.doc.length());
  }));

  const cf::OpBatch batch = cf::ops_since(mid.doc, 0);
  cf::Document remote(reader);
  results.push_back(timed("remote-batch-merge", batch.ops.size(), [&] {
    cf::PeerState peer{editor, 0, {}};
    cf::apply_batch(remote, peer, batch);
    return static_cast<std::size_t>(remote.length());
  }));

  if (remote.text() != mid.doc.text()) {
    std::cerr << "cfold: merged replica diverged from its source\n";
    return kFail;
  }
  std::cout << "chars " << n << '\n';
  for (const auto& r : results) {
    const double per_op = r.ops == 0 ? 0.0 : r.ns / static_cast<double>(r.ops);
    std::cout << r.name << ": " << r.ops << " ops, " << static_cast<std::uint64_t>(per_op)
              << " ns/op, peak entries " << r.peak_entries << '\n';
  }
  return kPass;
}

int cmd_dump(const std::string& path, const std::string& what, const std::string& replica) {
  auto src = read_file(path);
  if (!src) {
    std::cerr << "cfold: cannot read " << path << '\n';
    return kUsage;
  }
  try {
    const cf::DumpWhat selector = cf::parse_dump_what(what);
    if (src->starts_with("CFLD1 ")) {
      std::cout << cf::dump(cf::load_document(*src), selector);
      return kPass;
    }
    const cf::Scenario sc = cf::parse_scenario(*src);
    cf::ScenarioRunner runner;
    for (const auto& c : sc.commands) {
      auto o = runner.execute(c);
      if (o.status == cf::Outcome::Status::error) {
        std::cerr << path << ':' << c.line << ": " << o.detail << '\n';
        return kUsage;
      }
    }
    if (runner.slots().empty()) {
      std::cerr << "cfold: " << path << " declares no replicas\n";
      return kUsage;
    }
    const auto& slot = replica.empty() ? runner.slots().front() : runner.slot(replica);
    std::cout << cf::dump(slot.replica.doc, selector);
    return kPass;
  } catch (const cf::ParseError& e) {
    std::cerr << path << ": " << e.what() << '\n';
  } catch (const cf::error& e) {
    std::cerr << "cfold: " << e.what() << '\n';
  }
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chronofold replicated text toolkit"};
  app.require_subcommand(1);

  std::string run_file;
  auto* run = app.add_subcommand("run", "Execute a scenario script and print its transcript");
  run->add_option("file", run_file, "Scenario file")->required();

  std::uint64_t seed = 1;
  std::size_t replicas = 3;
  std::size_t ops = 100;
  std::size_t cases = 1;
  bool no_prefixes = false;
  auto* fuzz = app.add_subcommand("fuzz", "Random schedules checked against the oracle");
  fuzz->add_option("--seed", seed, "First seed")->required();
  fuzz->add_option("--replicas", replicas, "Replica count")->required()->check(CLI::PositiveNumber);
  fuzz->add_option("--ops", ops, "Edit budget per case")->required()->check(CLI::PositiveNumber);
  fuzz->add_option("--cases", cases, "Consecutive seeds to run")->check(CLI::PositiveNumber);
  fuzz->add_flag("--no-prefix-check", no_prefixes, "Skip the quadratic prefix-version check");

  std::size_t chars = 0;
  auto* bench = app.add_subcommand("bench", "Time typing, mid-document edits and batch merge");
  bench->add_option("--chars", chars, "Characters per workload")->required()->check(CLI::PositiveNumber);

  std::string dump_file;
  std::string what;
  std::string replica;
  auto* dump = app.add_subcommand("dump", "Print one view of a replica");
  dump->add_option("file", dump_file, "CFLD1 dump or scenario file")->required();
  dump->add_option("--what", what, "text, log, weave, chronofold or costructures")
      ->required()
      ->check(CLI::IsMember({"text", "log", "weave", "chronofold", "costructures"}));
  dump->add_option("--replica", replica, "Replica of a scenario (default: first declared)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  if (*run) return cmd_run(run_file);
  if (*fuzz) return cmd_fuzz(seed, replicas, ops, cases, !no_prefixes);
  if (*bench) return cmd_bench(chars);
  return cmd_dump(dump_file, what, replica);
}
