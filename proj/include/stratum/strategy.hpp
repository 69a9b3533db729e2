// Strategy values, rewrite results and the per-execution context.
//
// A Strategy<P> is a named, pure function from a term P to a RewriteResult<P>.
// Every invocation goes through operator(), which enforces the fuel budget, keeps
// the rule-success counters and records trace events.
#pragma once

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace stratum {

/// Identity of a strategy: its name plus rendered parameters.
struct StrategyId {
  std::string name;
  std::vector<std::string> params;

  std::string render() const {
    if (params.empty()) return name;
    std::string out = name + "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (i) out += ",";
      out += params[i];
    }
    return out + ")";
  }
  friend bool operator==(const StrategyId&, const StrategyId&) = default;
};

template <class P>
class RewriteResult {
 public:
  struct Success {
    P program;
  };
  struct Failure {
    StrategyId failed;
  };

  static RewriteResult success(P p) { return RewriteResult(Success{std::move(p)}); }
  static RewriteResult failure(StrategyId id) { return RewriteResult(Failure{std::move(id)}); }

  bool ok() const { return std::holds_alternative<Success>(v_); }
  explicit operator bool() const { return ok(); }

  const P& program() const { return std::get<Success>(v_).program; }
  P& program() { return std::get<Success>(v_).program; }
  const StrategyId& failed() const { return std::get<Failure>(v_).failed; }

  template <class F>
  RewriteResult mapSuccess(F&& f) const {
    if (!ok()) return *this;
    return success(f(program()));
  }

 private:
  explicit RewriteResult(std::variant<Success, Failure> v) : v_(std::move(v)) {}
  std::variant<Success, Failure> v_;
};

/// Raised when an execution exceeds its rewrite budget or recursion bound.
/// Distinct from Failure: the strategy did not finish.
class FuelExhausted : public std::runtime_error {
 public:
  explicit FuelExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct FuelLimits {
  std::uint64_t steps = 10'000'000;
  std::uint64_t depth = 100'000;

  /// Defaults, with STRATEGY_FUEL overriding the step budget when set.
  static FuelLimits fromEnvironment();
};

struct TraceEvent {
  std::string rule;
  std::vector<int> path;
  bool committed = true;
};

struct StepCounts {
  std::uint64_t total = 0;
  std::uint64_t committed = 0;
  std::map<std::string, std::uint64_t> perRule;
  std::map<std::string, std::uint64_t> perRuleCommitted;
};

/// State for one strategy execution. Not shared between executions.
class ExecContext {
 public:
  explicit ExecContext(FuelLimits limits = FuelLimits::fromEnvironment(), bool trace = false)
      : limits_(limits), tracing_(trace) {}

  void consumeFuel() {
    if (++steps_ > limits_.steps)
      throw FuelExhausted("rewrite budget of " + std::to_string(limits_.steps) + " steps exhausted");
  }
  void enter() {
    if (++depth_ > limits_.depth)
      throw FuelExhausted("recursion bound of " + std::to_string(limits_.depth) + " exceeded");
  }
  void leave() { --depth_; }

  std::size_t mark() const { return live_.size(); }

  void recordRuleSuccess(const std::string& rule) {
    live_.push_back(TraceEvent{rule, tracing_ ? path_ : std::vector<int>{}, true});
  }

  /// Events recorded since `m` belong to a failed execution branch.
  void discardSince(std::size_t m) {
    for (std::size_t i = m; i < live_.size(); ++i) {
      ++discardedPerRule_[live_[i].rule];
      ++discardedTotal_;
      if (tracing_) {
        live_[i].committed = false;
        discarded_.push_back(std::move(live_[i]));
      }
    }
    live_.resize(m);
  }

  void pushPath(int child) { path_.push_back(child); }
  void popPath() { path_.pop_back(); }

  StepCounts counts() const {
    StepCounts c;
    c.committed = live_.size();
    c.total = c.committed + discardedTotal_;
    for (const auto& e : live_) {
      ++c.perRule[e.rule];
      ++c.perRuleCommitted[e.rule];
    }
    for (const auto& [rule, n] : discardedPerRule_) c.perRule[rule] += n;
    return c;
  }

  /// All recorded events, committed ones first in execution order.
  std::vector<TraceEvent> trace() const {
    std::vector<TraceEvent> out = live_;
    out.insert(out.end(), discarded_.begin(), discarded_.end());
    return out;
  }

  std::uint64_t stepsUsed() const { return steps_; }

 private:
  FuelLimits limits_;
  bool tracing_;
  std::uint64_t steps_ = 0;
  std::uint64_t depth_ = 0;
  std::vector<int> path_;
  std::vector<TraceEvent> live_;
  std::vector<TraceEvent> discarded_;
  std::map<std::string, std::uint64_t> discardedPerRule_;
  std::uint64_t discardedTotal_ = 0;
};

inline FuelLimits FuelLimits::fromEnvironment() {
  FuelLimits l;
  if (const char* env = std::getenv("STRATEGY_FUEL")) {
    try {
      l.steps = std::stoull(env);
    } catch (const std::exception&) {
    }
  }
  return l;
}

template <class P>
class Strategy {
 public:
  using Fn = std::function<RewriteResult<P>(const P&, ExecContext&)>;

  Strategy() = default;
  Strategy(StrategyId id, Fn fn, bool isRule = false)
      : impl_(std::make_shared<Impl>(Impl{std::move(id), std::move(fn), isRule})) {}
  Strategy(std::string name, Fn fn, bool isRule = false)
      : Strategy(StrategyId{std::move(name), {}}, std::move(fn), isRule) {}

  const StrategyId& id() const { return impl_->id; }
  std::string name() const { return impl_->id.render(); }
  bool isRule() const { return impl_->isRule; }
  bool valid() const { return impl_ != nullptr; }

  RewriteResult<P> operator()(const P& p, ExecContext& ctx) const;

  /// Convenience entry point with a fresh context.
  RewriteResult<P> operator()(const P& p) const {
    ExecContext ctx;
    return (*this)(p, ctx);
  }

 private:
  struct Impl {
    StrategyId id;
    Fn fn;
    bool isRule;
  };
  std::shared_ptr<const Impl> impl_;
};

template <class P>
RewriteResult<P> Strategy<P>::operator()(const P& p, ExecContext& ctx) const {
  if (impl_->isRule) ctx.consumeFuel();
  ctx.enter();
  const std::size_t m = ctx.mark();
  struct Leave {
    ExecContext& c;
    ~Leave() { c.leave(); }
  } guard{ctx};
  RewriteResult<P> r = impl_->fn(p, ctx);
  if (!r.ok()) {
    ctx.discardSince(m);
  } else if (impl_->isRule) {
    ctx.recordRuleSuccess(impl_->id.name);
  }
  return r;
}

/// Renders an integer list as used in strategy identities, e.g. "[1,2,3]".
inline std::string renderList(const std::vector<int>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(xs[i]);
  }
  return s + "]";
}

}  // namespace stratum
