// stratum: apply strategies to array programs, emit C, report rewrite steps.
//
// Exit codes: 0 success, 1 strategy failure (or `check` mismatch),
// 2 fuel exhausted, 3 usage, parse or type error.
#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>

#include "stratum/codegen.hpp"
#include "stratum/corpus.hpp"
#include "stratum/ir/interp.hpp"
#include "stratum/rules.hpp"
#include "stratum/scheduling.hpp"
#include "stratum/script.hpp"

using namespace stratum;

namespace {

constexpr int kFailure = 1;
constexpr int kFuel = 2;
constexpr int kUsage = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct StrategyFailed {
  std::string id;
};

ir::SizeBindings parseSizes(const std::string& text) {
  ir::SizeBindings out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("bad size binding '" + item + "', expected NAME=VALUE");
    try {
      out[item.substr(0, eq)] = std::stoi(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("bad size binding '" + item + "'");
    }
  }
  return out;
}

void writeFile(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

struct Job {
  std::string program;
  std::string strategy;
  std::string sizes;
};

void addJobOptions(CLI::App* cmd, Job& job) {
  cmd->add_option("--program", job.program, "Corpus program name or .rise file")->required();
  cmd->add_option("--strategy", job.strategy, "Schedule name, shipped script, .strat file or script text")->required();
  cmd->add_option("--sizes", job.sizes, "Size bindings, e.g. M=64,N=64,K=64");
}

Outcome runJob(const Job& job, ir::Expr& input, bool trace = false) {
  input = loadProgram(job.program, parseSizes(job.sizes)).main;
  Strat s = resolveStrategy(job.strategy);
  Outcome out = run(s, input, trace);
  if (!out.result.ok()) throw StrategyFailed{out.result.failed().render()};
  return out;
}

void printCounts(const StepCounts& c, std::ostream& os) {
  os << "total " << c.total << "\ncommitted " << c.committed << "\n";
  for (const auto& [rule, n] : c.perRule) {
    auto it = c.perRuleCommitted.find(rule);
    os << "  " << std::left << std::setw(26) << rule << std::right << std::setw(8) << n << std::setw(8)
       << (it == c.perRuleCommitted.end() ? 0 : it->second) << "\n";
  }
}

nlohmann::json traceJson(const std::vector<TraceEvent>& events) {
  auto out = nlohmann::json::array();
  for (const auto& e : events)
    out.push_back({{"ruleName", e.rule}, {"pathFromRoot", e.path}, {"committed", e.committed}});
  return out;
}

int cmdList() {
  std::cout << "programs:\n";
  for (const auto& p : corpus()) std::cout << "  " << p.name << "\n";
  std::cout << "rules:\n";
  for (const auto& r : ruleCatalog())
    std::cout << "  " << r.name << (r.intParams ? "(" + std::string(r.intParams == 1 ? "int" : "int, int") + ")" : "")
              << "\n";
  std::cout << "schedules:\n";
  for (const auto& s : allSchedules()) std::cout << "  " << s.name << " (" << s.program << ")\n";
  std::cout << "scripts:\n";
  for (const auto& s : shippedScripts()) std::cout << "  " << s.name << "\n";
  std::cout << "strategy names:\n";
  for (const auto& s : scriptNames()) std::cout << "  " << s.name << s.params << "\n";
  return 0;
}

int cmdApply(const Job& job, const std::string& outPath, const std::string& tracePath, bool count) {
  ir::Expr input;
  Outcome out = runJob(job, input, !tracePath.empty());
  const std::string text = ir::print(out.result.program()) + "\n";
  if (outPath.empty())
    std::cout << text;
  else
    writeFile(outPath, text);
  if (count) printCounts(out.counts, std::cout);
  if (!tracePath.empty()) writeFile(tracePath, traceJson(out.trace).dump(1) + "\n");
  return 0;
}

int cmdEmitC(const Job& job, const std::string& outPath, bool harness, std::uint64_t seed, const std::string& fn) {
  ir::Expr input;
  Outcome out = runJob(job, input);
  const ir::Expr& e = out.result.program();
  writeFile(outPath, harness ? emitHarness(e, seed, fn) : emitC(e, fn));
  return 0;
}

int cmdCheck(const Job& job, std::uint64_t seed) {
  ir::Expr input;
  Outcome out = runJob(job, input);
  auto args = ir::randomInputs(input, seed);
  auto before = ir::flatten(ir::eval(input, args));
  auto after = ir::flatten(ir::eval(out.result.program(), args));
  const double err = ir::maxRelError(before, after);
  const bool ok = before.size() == after.size() && err <= 1e-4;
  std::cout << (ok ? "equal" : "different") << " (max relative error " << err << ", seed " << seed << ")\n";
  return ok ? 0 : kFailure;
}

int cmdSteps() {
  std::cout << std::left << std::setw(14) << "schedule" << std::right << std::setw(10) << "total" << std::setw(11)
            << "committed" << "\n";
  for (const auto& s : gemmSchedules()) {
    auto out = run(s.make(), loadProgram(s.program).main);
    if (!out.result.ok()) throw StrategyFailed{out.result.failed().render()};
    std::cout << std::left << std::setw(14) << s.name << std::right << std::setw(10) << out.counts.total
              << std::setw(11) << out.counts.committed << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rewrite array programs with strategies and emit C"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List programs, rules, schedules and strategy names");

  Job job;
  std::string outPath, tracePath, fnName = "kernel";
  bool count = false, harness = false, allGemm = false;
  std::uint64_t seed = 1;

  auto* apply = app.add_subcommand("apply", "Apply a strategy and print the result");
  addJobOptions(apply, job);
  apply->add_option("--out", outPath, "Write the result here instead of stdout");
  apply->add_option("--trace", tracePath, "Write the JSON rewrite trace here");
  apply->add_flag("--count", count, "Print rewrite step counts");

  auto* emit = app.add_subcommand("emit-c", "Apply a strategy and emit C");
  addJobOptions(emit, job);
  emit->add_option("--out", outPath, "Output file")->required();
  emit->add_flag("--harness", harness, "Emit a main() that runs the kernel on seeded inputs");
  emit->add_option("--seed", seed, "Input seed for --harness");
  emit->add_option("--fn", fnName, "Kernel function name");

  auto* check = app.add_subcommand("check", "Compare program values before and after a strategy");
  addJobOptions(check, job);
  check->add_option("--seed", seed, "Input seed");

  auto* steps = app.add_subcommand("steps", "Rewrite step counts of the GEMM schedules");
  steps->add_flag("--all-gemm", allGemm, "All seven GEMM schedules")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*list) return cmdList();
    if (*apply) return cmdApply(job, outPath, tracePath, count);
    if (*emit) return cmdEmitC(job, outPath, harness, seed, fnName);
    if (*check) return cmdCheck(job, seed);
    if (*steps) return cmdSteps();
  } catch (const StrategyFailed& f) {
    std::cerr << "failure: " << f.id << "\n";
    return kFailure;
  } catch (const FuelExhausted& e) {
    std::cerr << "fuel exhausted: " << e.what() << "\n";
    return kFuel;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
