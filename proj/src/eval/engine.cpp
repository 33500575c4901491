#include "envnav/eval/engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "envnav/eval/envelope.hpp"
#include "envnav/eval/semantics.hpp"
#include "envnav/eval/time_routine.hpp"
#include "envnav/lang/graph.hpp"

namespace envnav::eval {

using lang::BinaryOp;

namespace {

class ExprEvaluator {
 public:
  ExprEvaluator(EvalContext& ctx, const std::string& owner) : ctx_(ctx), owner_(owner) {}

  TimeSeries eval(const lang::Expr& e) {
    auto out = std::visit([&](const auto& n) { return node(n); }, e.node);
    if (!path_.empty() && ctx_.options().keep_subexpressions && !leaf(e)) {
      ctx_.record_subexpression(subexpression_name(owner_, path_), out);
    }
    return out;
  }

 private:
  static bool leaf(const lang::Expr& e) {
    return std::holds_alternative<lang::NumberLit>(e.node) || std::holds_alternative<lang::BoolLit>(e.node) ||
           std::holds_alternative<lang::Ref>(e.node);
  }

  TimeSeries child(const lang::Expr& e, std::size_t pos) {
    path_.push_back(pos);
    auto out = eval(e);
    path_.pop_back();
    return out;
  }

  const TimeGrid& grid() const { return ctx_.grid(); }
  kernels::Backend backend() const { return ctx_.options().backend; }

  TimeSeries node(const lang::NumberLit& n) { return TimeSeries::filled(grid(), NumericSample::of(n.value)); }
  TimeSeries node(const lang::BoolLit& n) { return TimeSeries::filled(grid(), to_logic(n.value)); }
  TimeSeries node(const lang::Ref& n) { return ctx_.series(n.name); }

  TimeSeries node(const lang::Unary& n) {
    auto in = child(*n.operand, 0);
    std::vector<LogicSample> out(grid().count);
    kernels::logic_not(backend(), in.logic(), out);
    return TimeSeries::logic(grid(), std::move(out));
  }

  TimeSeries node(const lang::Binary& n) {
    auto l = child(*n.lhs, 0);
    auto r = child(*n.rhs, 1);
    const std::size_t count = grid().count;
    if (lang::is_arithmetic(n.op)) {
      std::vector<NumericSample> out(count);
      kernels::arith(backend(), n.op, l.numeric(), r.numeric(), out);
      return TimeSeries::numeric(grid(), std::move(out));
    }
    std::vector<LogicSample> out(count);
    if (lang::is_comparison(n.op) && l.kind() == SeriesKind::Numeric && r.kind() == SeriesKind::Numeric) {
      kernels::compare(backend(), n.op, l.numeric(), r.numeric(), out);
    } else {
      kernels::logic_binary(backend(), n.op, l.logic(), r.logic(), out);
    }
    return TimeSeries::logic(grid(), std::move(out));
  }

  TimeSeries node(const lang::IfThenElse& n) {
    auto c = child(*n.cond, 0);
    auto t = child(*n.then_branch, 1);
    std::optional<TimeSeries> f;
    if (n.else_branch) f = child(*n.else_branch, 2);
    const std::size_t count = grid().count;
    if (t.kind() == SeriesKind::Logic) {
      std::vector<LogicSample> out(count);
      kernels::ite_logic(backend(), c.logic(), t.logic(), f ? f->logic() : kernels::Logic{}, out);
      return TimeSeries::logic(grid(), std::move(out));
    }
    if (!f) throw std::invalid_argument("numeric IF in '" + owner_ + "' has no ELSE branch");
    std::vector<NumericSample> out(count);
    kernels::ite_numeric(backend(), c.logic(), t.numeric(), f->numeric(), out);
    return TimeSeries::numeric(grid(), std::move(out));
  }

  TimeSeries node(const lang::Call& n) {
    std::vector<TimeSeries> args;
    args.reserve(n.args.size());
    for (std::size_t i = 0; i < n.args.size(); ++i) args.push_back(child(*n.args[i], i));
    std::vector<kernels::Numeric> views;
    for (const auto& a : args) views.push_back(a.numeric());
    std::vector<NumericSample> out(grid().count);
    kernels::library(backend(), n.fn, views, out);
    return TimeSeries::numeric(grid(), std::move(out));
  }

  EvalContext& ctx_;
  const std::string& owner_;
  std::vector<std::size_t> path_;
};

}  // namespace

std::string subexpression_name(const std::string& artifact, const std::vector<std::size_t>& path) {
  std::string out = artifact + "[";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(path[i]);
  }
  return out + "]";
}

EvalContext::EvalContext(const lang::Specification& spec, const SensorData& data, TimeGrid grid, EvalOptions options)
    : spec_(spec), data_(data), grid_(grid), options_(options) {
  if (!spec.instances.empty()) throw std::invalid_argument("specification still contains template instances");
  for (const auto& [id, s] : data) {
    if (s.grid() != grid) throw std::invalid_argument("series '" + id + "' is not on the evaluation grid");
  }
}

const TimeSeries& EvalContext::series(std::string_view name) {
  if (auto it = data_.find(name); it != data_.end()) return it->second;
  if (const auto* def = spec_.find(name)) {
    const auto& r = compute(*def);
    if (const auto* vs = std::get_if<VirtualSensor>(&r)) return vs->series;
    return expanded_metrics_.find(name)->second;
  }
  throw MissingDataError(std::string(name), "no data for sensor '" + std::string(name) + "'");
}

const ArtifactResult& EvalContext::artifact(std::string_view name) {
  const auto* def = spec_.find(name);
  if (!def) throw std::invalid_argument("unknown artifact '" + std::string(name) + "'");
  return compute(*def);
}

const MetricResult& EvalContext::metric(std::string_view name) {
  const auto* m = std::get_if<MetricResult>(&artifact(name));
  if (!m) throw std::invalid_argument("'" + std::string(name) + "' is not a metric");
  return *m;
}

std::size_t EvalContext::evaluation_count(std::string_view name) const {
  auto it = evaluations_.find(name);
  return it == evaluations_.end() ? 0 : it->second;
}

void EvalContext::record_subexpression(std::string name, TimeSeries series) {
  VirtualSensor vs{name, std::move(series)};
  subexpressions_.insert_or_assign(std::move(name), std::move(vs));
}

void EvalContext::mark_skipped(const std::string& name, const std::string& reason) {
  skipped_.emplace(name, reason);
  std::erase_if(subexpressions_, [&](const auto& kv) { return kv.first.starts_with(name + "["); });
}

const ArtifactResult& EvalContext::compute(const lang::ArtifactDef& def) {
  const std::string& name = lang::name_of(def);
  if (auto it = cache_.find(name); it != cache_.end()) return it->second;
  if (auto it = skipped_.find(name); it != skipped_.end()) {
    throw MissingDataError(name, "depends on skipped artifact '" + name + "'");
  }
  if (std::find(in_progress_.begin(), in_progress_.end(), name) != in_progress_.end()) {
    auto cycle = std::vector<std::string>(std::find(in_progress_.begin(), in_progress_.end(), name), in_progress_.end());
    cycle.push_back(name);
    throw lang::CycleError(std::move(cycle));
  }
  in_progress_.push_back(name);
  struct Pop {
    std::vector<std::string>& v;
    ~Pop() { v.pop_back(); }
  } pop{in_progress_};

  ArtifactResult result = std::visit(
      [&](const auto& d) -> ArtifactResult {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, lang::RuleDef>) return eval_rule(d, *this);
        else if constexpr (std::is_same_v<T, lang::FunctionDef>) return eval_function(d, *this);
        else if constexpr (std::is_same_v<T, lang::CharacteristicDef>) return eval_characteristic(d, *this);
        else if constexpr (std::is_same_v<T, lang::MetricDef>) return eval_metric(d, *this);
        else return VirtualSensor{d.name, eval_time_routine(d, grid_, spec_, options_.backend)};
      },
      def);
  ++evaluations_[name];
  if (const auto* m = std::get_if<MetricResult>(&result)) expanded_metrics_.emplace(name, expand_metric(*m));
  return cache_.emplace(name, std::move(result)).first->second;
}

VirtualSensor eval_rule(const lang::RuleDef& rule, EvalContext& ctx) {
  auto series = ExprEvaluator(ctx, rule.name).eval(*rule.body);
  std::vector<LogicSample> out(series.logic().begin(), series.logic().end());

  std::vector<const TimeSeries*> sensors;
  for (const auto& c : rule.context) {
    if (!ctx.spec().find(c)) sensors.push_back(&ctx.series(c));
  }
  if (!sensors.empty()) {
    std::vector<std::uint8_t> mask(ctx.grid().count);
    kernels::for_each_index(ctx.options().backend, mask.size(), [&](std::size_t k) {
      mask[k] = std::all_of(sensors.begin(), sensors.end(), [k](const TimeSeries* s) { return s->missing_at(k); });
    });
    kernels::mask_missing(ctx.options().backend, mask, out);
  }
  return VirtualSensor{rule.name, TimeSeries::logic(ctx.grid(), std::move(out))};
}

VirtualSensor eval_function(const lang::FunctionDef& fn, EvalContext& ctx) {
  auto series = ExprEvaluator(ctx, fn.name).eval(*fn.body);
  if (series.kind() != SeriesKind::Numeric) throw std::invalid_argument("function '" + fn.name + "' is not numeric");
  return VirtualSensor{fn.name, std::move(series)};
}

VirtualSensor eval_characteristic(const lang::CharacteristicDef& ch, EvalContext& ctx) {
  Envelope env(ch);
  auto x = ctx.series(ch.x_ref).numeric();
  auto y = ctx.series(ch.y_ref).numeric();
  std::vector<LogicSample> out(ctx.grid().count);
  kernels::for_each_index(ctx.options().backend, out.size(), [&](std::size_t k) { out[k] = env.check(x[k], y[k]); });
  return VirtualSensor{ch.name, TimeSeries::logic(ctx.grid(), std::move(out))};
}

MetricResult eval_metric(const lang::MetricDef& m, EvalContext& ctx) {
  return compute_metric(m.name, ctx.series(m.context), m.base, m.params, m.filter);
}

FulfillmentScore fulfillment_ratio(const VirtualSensor& vs, const TimeSeries* filter) {
  FulfillmentScore s{vs.name, std::nullopt, 0, 0, 0, 0};
  auto v = vs.series.logic();
  std::span<const LogicSample> f;
  if (filter) {
    if (filter->grid() != vs.series.grid()) throw std::invalid_argument("filter is not on the series grid");
    f = filter->logic();
  }
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (filter && f[k] != LogicSample::True) continue;
    switch (v[k]) {
      case LogicSample::True: ++s.n_true; break;
      case LogicSample::False: ++s.n_false; break;
      case LogicSample::Missing: ++s.n_missing; break;
      case LogicSample::Undefined: ++s.n_undefined; break;
    }
  }
  if (s.n_true + s.n_false > 0) {
    s.ratio = static_cast<double>(s.n_true) / static_cast<double>(s.n_true + s.n_false);
  }
  return s;
}

FulfillmentScore fulfillment_ratio(const VirtualSensor& vs, const lang::TimeRoutineDef& filter,
                                   const lang::Specification& env) {
  auto mask = eval_time_routine(filter, vs.series.grid(), env);
  return fulfillment_ratio(vs, &mask);
}

const VirtualSensor* EvalOutput::virtual_sensor(std::string_view name) const {
  auto it = artifacts.find(std::string(name));
  if (it != artifacts.end()) return std::get_if<VirtualSensor>(&it->second);
  auto sub = subexpressions.find(std::string(name));
  return sub == subexpressions.end() ? nullptr : &sub->second;
}

const MetricResult* EvalOutput::metric(std::string_view name) const {
  auto it = artifacts.find(std::string(name));
  return it == artifacts.end() ? nullptr : std::get_if<MetricResult>(&it->second);
}

EvalOutput evaluate_all(EvalContext& ctx) {
  EvalOutput out;
  auto graph = lang::build_dependency_graph(ctx.spec());
  for (const auto& name : graph.topological_order()) {
    try {
      out.artifacts.emplace(name, ctx.artifact(name));
      out.order.push_back(name);
    } catch (const MissingDataError& e) {
      if (ctx.options().on_missing_sensor == MissingSensorPolicy::Throw) throw;
      ctx.mark_skipped(name, e.what());
    }
  }
  out.subexpressions = ctx.take_subexpressions();
  out.skipped = ctx.skipped();
  for (const auto& name : out.order) out.evaluations[name] = ctx.evaluation_count(name);
  return out;
}

EvalOutput evaluate_all(const lang::Specification& spec, const SensorData& data, const TimeGrid& grid,
                        EvalOptions options) {
  EvalContext ctx(spec, data, grid, options);
  return evaluate_all(ctx);
}

}  // namespace envnav::eval
