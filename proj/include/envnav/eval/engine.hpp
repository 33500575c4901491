// Evaluation of a resolved specification over sensor data.

#pragma once

#include <map>
#include <utility>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "envnav/error.hpp"
#include "envnav/eval/kernels.hpp"
#include "envnav/eval/metric.hpp"
#include "envnav/lang/ast.hpp"
#include "envnav/lang/validate.hpp"
#include "envnav/timeseries.hpp"

namespace envnav::eval {

struct VirtualSensor {
  std::string name;
  TimeSeries series;

  friend bool operator==(const VirtualSensor&, const VirtualSensor&) = default;
};

using SensorData = std::map<std::string, TimeSeries, std::less<>>;

class MissingDataError : public Error {
 public:
  MissingDataError(std::string artifact, std::string reason)
      : Error(reason), artifact_(std::move(artifact)) {}
  const std::string& artifact() const { return artifact_; }

 private:
  std::string artifact_;
};

enum class MissingSensorPolicy : std::uint8_t { Throw, Skip };

struct EvalOptions {
  kernels::Backend backend = kernels::Backend::OpenMP;
  // Keep a virtual sensor for every operator node of rule/function bodies.
  bool keep_subexpressions = true;
  MissingSensorPolicy on_missing_sensor = MissingSensorPolicy::Throw;
};

using ArtifactResult = std::variant<VirtualSensor, MetricResult>;

// Sensor data, target grid, resolved specification and the memo cache.
// Artifacts are computed on first request and exactly once.
class EvalContext {
 public:
  // `spec` must already be expanded (no template instances) and validated.
  // Throws std::invalid_argument when a sensor series is not on `grid`.
  EvalContext(const lang::Specification& spec, const SensorData& data, TimeGrid grid, EvalOptions options = {});

  const TimeGrid& grid() const { return grid_; }
  const lang::Specification& spec() const { return spec_; }
  const EvalOptions& options() const { return options_; }

  // Series of a sensor or artifact; metrics come back as step series.
  // Throws MissingDataError when a sensor has no data.
  const TimeSeries& series(std::string_view name);
  const ArtifactResult& artifact(std::string_view name);
  const MetricResult& metric(std::string_view name);

  std::size_t evaluation_count(std::string_view name) const;
  const std::map<std::string, VirtualSensor>& subexpressions() const { return subexpressions_; }
  std::map<std::string, VirtualSensor> take_subexpressions() { return std::exchange(subexpressions_, {}); }
  const std::map<std::string, std::string>& skipped() const { return skipped_; }

  // Whether the expression evaluator should record `name` as a sub-expression.
  void record_subexpression(std::string name, TimeSeries series);
  // Records a failure so later requests for `name` fail the same way.
  void mark_skipped(const std::string& name, const std::string& reason);

 private:
  const ArtifactResult& compute(const lang::ArtifactDef& def);

  const lang::Specification& spec_;
  const SensorData& data_;
  TimeGrid grid_;
  EvalOptions options_;
  std::map<std::string, ArtifactResult, std::less<>> cache_;
  std::map<std::string, TimeSeries, std::less<>> expanded_metrics_;
  std::map<std::string, std::size_t, std::less<>> evaluations_;
  std::map<std::string, VirtualSensor> subexpressions_;
  std::map<std::string, std::string> skipped_;
  std::vector<std::string> in_progress_;
};

// Sub-expression virtual sensors are named "<artifact>[<path>]", where the
// path lists child positions from the body root, e.g. "R[2.0]".
std::string subexpression_name(const std::string& artifact, const std::vector<std::size_t>& path);

VirtualSensor eval_rule(const lang::RuleDef& rule, EvalContext& ctx);
VirtualSensor eval_function(const lang::FunctionDef& fn, EvalContext& ctx);
VirtualSensor eval_characteristic(const lang::CharacteristicDef& ch, EvalContext& ctx);
MetricResult eval_metric(const lang::MetricDef& m, EvalContext& ctx);

struct FulfillmentScore {
  std::string name;
  std::optional<double> ratio;  // true / (true + false)
  std::size_t n_true = 0;
  std::size_t n_false = 0;
  std::size_t n_missing = 0;
  std::size_t n_undefined = 0;
};

// Only timestamps where `filter` is true count, when a filter is given.
FulfillmentScore fulfillment_ratio(const VirtualSensor& vs, const TimeSeries* filter = nullptr);
FulfillmentScore fulfillment_ratio(const VirtualSensor& vs, const lang::TimeRoutineDef& filter,
                                   const lang::Specification& env);

struct EvalOutput {
  std::map<std::string, ArtifactResult> artifacts;
  std::map<std::string, VirtualSensor> subexpressions;
  std::map<std::string, std::string> skipped;  // artifact -> reason
  std::vector<std::string> order;              // evaluation order
  std::map<std::string, std::size_t> evaluations;

  const VirtualSensor* virtual_sensor(std::string_view name) const;
  const MetricResult* metric(std::string_view name) const;
};

// Evaluates every artifact in dependency order. With the Throw policy a
// missing sensor series raises MissingDataError; with Skip the artifact and
// its dependents are listed in `skipped`.
EvalOutput evaluate_all(const lang::Specification& spec, const SensorData& data, const TimeGrid& grid,
                        EvalOptions options = {});
// Same, on a caller-owned context that stays usable afterwards.
EvalOutput evaluate_all(EvalContext& ctx);

}  // namespace envnav::eval
