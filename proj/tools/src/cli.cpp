#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "balloon/dump.hpp"
#include "balloon/errors.hpp"
#include "balloon/ordering.hpp"
#include "balloon/sim/simulator.hpp"

namespace balloon::cli {
namespace {

namespace fs = std::filesystem;

BlockGraph load_dump(const std::string& path, SampleCheck mode = SampleCheck::Relaxed) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::MalformedDump, "cannot open " + path);
  return read_dump(in, mode);
}

std::vector<Digest> confirmed_of(const BlockGraph& g) { return confirmed_prefix(g, params_of(g)); }

struct RunResult {
  int code = kOk;
  std::string message;
};

RunResult run_one(const sim::ScenarioConfig& config, std::uint64_t seed, const fs::path& stem) {
  sim::Simulator simulator(config, seed);
  RunResult result;
  try {
    simulator.run();
  } catch (const std::exception& e) {
    result.code = kFailed;
    result.message = stem.filename().string() + ": run aborted: " + e.what();
  }
  const sim::Metrics& m = simulator.metrics();
  {
    std::ofstream out(stem.string() + ".metrics.jsonl");
    sim::write_jsonl(out, m);
  }
  if (result.code == kOk) {
    const auto& nodes = simulator.nodes();
    const auto observer = std::find_if(nodes.begin(), nodes.end(), [](const auto& n) { return n.honest(); });
    const sim::NodeState& node = observer != nodes.end() ? *observer : nodes.front();
    std::ofstream dump(stem.string() + ".dump");
    write_dump(dump, node.local_graph);
    std::ofstream order(stem.string() + ".order.tsv");
    write_order(order, total_order(node.local_graph, config.protocol), node.local_graph);
  }
  if (result.code == kOk && m.summary.safety_violations > 0) {
    result.code = kFailed;
    std::ostringstream msg;
    msg << stem.filename().string() << ": " << m.summary.safety_violations << " probe(s) saw diverging confirmed prefixes";
    result.message = msg.str();
  }
  if (result.code == kOk) {
    std::ostringstream msg;
    msg << stem.filename().string() << ": " << m.summary.blocks_mined << " blocks, " << m.summary.view_changes
        << " view change(s), confirmed " << m.summary.confirmed_length << "/" << m.summary.ordered_length;
    result.message = msg.str();
  }
  return result;
}

}  // namespace

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.configs.empty()) {
    err << "run: no scenario given\n";
    return kBadInput;
  }
  struct Job {
    sim::ScenarioConfig config;
    std::uint64_t seed;
    fs::path stem;
  };
  std::vector<Job> jobs;
  try {
    fs::create_directories(opts.out_dir);
    for (const auto& path : opts.configs) {
      sim::ScenarioConfig config = sim::load_scenario(path);
      if (opts.seed) config.seed = *opts.seed;
      if (opts.duration) config.duration = Rational::parse(*opts.duration);
      config.validate();
      std::string stem = fs::path(path).stem().string();
      if (std::any_of(jobs.begin(), jobs.end(), [&](const Job& j) { return j.stem.filename() == stem; })) {
        stem += "-" + std::to_string(jobs.size());
      }
      jobs.push_back({std::move(config), 0, fs::path(opts.out_dir) / stem});
      jobs.back().seed = jobs.back().config.seed;
    }
  } catch (const std::exception& e) {
    err << "configuration error: " << e.what() << '\n';
    return kBadInput;
  }

  std::vector<RunResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        results[i] = run_one(jobs[i].config, jobs[i].seed, jobs[i].stem);
      } catch (const std::exception& e) {
        results[i] = {kFailed, jobs[i].stem.filename().string() + ": " + e.what()};
      }
    }
  };
  const unsigned workers = std::clamp<unsigned>(opts.jobs, 1, static_cast<unsigned>(jobs.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kOk;
  for (const auto& r : results) {
    (r.code == kOk ? out : err) << r.message << '\n';
    code = std::max(code, r.code);
  }
  return code;
}

int cmd_order(const std::string& dump_path, std::ostream& out, std::ostream& err) {
  try {
    const BlockGraph g = load_dump(dump_path);
    write_order(out, total_order(g, params_of(g)), g);
    return kOk;
  } catch (const std::exception& e) {
    err << "order: " << e.what() << '\n';
    return kBadInput;
  }
}

int cmd_diff(const std::string& dump_a, const std::string& dump_b, std::ostream& out, std::ostream& err) {
  std::vector<Digest> a;
  std::vector<Digest> b;
  try {
    a = confirmed_of(load_dump(dump_a));
    b = confirmed_of(load_dump(dump_b));
  } catch (const std::exception& e) {
    err << "diff: " << e.what() << '\n';
    return kBadInput;
  }
  const std::size_t n = std::min(a.size(), b.size());
  std::size_t common = 0;
  while (common < n && a[common] == b[common]) ++common;
  out << "confirmed\t" << a.size() << '\t' << b.size() << '\n';
  out << "common_prefix\t" << common << '\n';
  if (common == n) {
    out << "consistent\n";
    return kOk;
  }
  out << "divergence\t" << common << '\t' << a[common].hex() << '\t' << b[common].hex() << '\n';
  return kFailed;
}

int cmd_validate(const std::string& dump_path, const std::optional<std::string>& block_hex, std::ostream& out,
                 std::ostream& err) {
  std::optional<BlockGraph> g;
  try {
    g.emplace(load_dump(dump_path, SampleCheck::Relaxed));
  } catch (const Error& e) {
    const bool rejected = std::string_view(e.what()).find("rejected") != std::string_view::npos;
    (rejected ? out : err) << "validate: " << e.what() << '\n';
    return rejected ? kFailed : kBadInput;
  } catch (const std::exception& e) {
    err << "validate: " << e.what() << '\n';
    return kBadInput;
  }
  out << "graph\t" << g->size() << " blocks accepted\n";
  if (!block_hex) return kOk;

  Block b;
  try {
    b = decode_block(from_hex(*block_hex));
  } catch (const std::exception& e) {
    err << "validate: " << e.what() << '\n';
    return kBadInput;
  }
  if (auto missing = g->missing_references(b); !missing.empty()) {
    out << "block\tunresolved reference " << missing.front().hex() << '\n';
    return kFailed;
  }
  const ValidationVerdict v = validate_block(*g, b, params_of(*g), SampleCheck::Relaxed);
  if (v.accepted()) {
    out << "block\taccept\n";
    return kOk;
  }
  out << "block\treject\t" << to_string(*v.reason) << '\t' << v.detail << '\n';
  return kFailed;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"balloon: adaptive parallel-chain consensus simulator and tools"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "Run one or more simulation scenarios");
  run->add_option("--config,configs", run_opts.configs, "Scenario file(s)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", run_opts.seed, "Override the scenario seed");
  run->add_option("--duration", run_opts.duration, "Override the scenario duration in seconds");
  run->add_option("--out-dir", run_opts.out_dir, "Directory for metrics, dumps and order exports");
  run->add_option("--jobs", run_opts.jobs, "Scenarios to run concurrently")->check(CLI::PositiveNumber);

  std::string order_dump;
  auto* order = app.add_subcommand("order", "Print the total order of a chain dump");
  order->add_option("dump", order_dump, "Chain dump")->required();

  std::string diff_a;
  std::string diff_b;
  auto* diff = app.add_subcommand("diff", "Compare the confirmed prefixes of two chain dumps");
  diff->add_option("a", diff_a, "First dump")->required();
  diff->add_option("b", diff_b, "Second dump")->required();

  std::string validate_dump;
  std::optional<std::string> block_hex;
  auto* validate = app.add_subcommand("validate", "Check a chain dump, and optionally one more block against it");
  validate->add_option("dump", validate_dump, "Chain dump")->required();
  validate->add_option("--block", block_hex, "Hex-encoded block to check against the dump");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream eo;
    const int code = app.exit(e, o, eo);
    out << o.str();
    err << eo.str();
    return code == 0 ? kOk : kBadInput;
  }

  if (*run) return cmd_run(run_opts, out, err);
  if (*order) return cmd_order(order_dump, out, err);
  if (*diff) return cmd_diff(diff_a, diff_b, out, err);
  return cmd_validate(validate_dump, block_hex, out, err);
}

}  // namespace balloon::cli
