#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cld/dsl.hpp"
#include "cld/model.hpp"

namespace cld {

enum class Integrator { euler, rk4 };

// Influence transfer f(x): linear x, or saturating x / (1 + x/K).
struct Form {
  enum Kind { linear, saturating } kind = linear;
  double k = 1.0;

  double operator()(double x) const { return kind == linear ? x : x / (1.0 + x / k); }
  friend bool operator==(const Form &, const Form &) = default;
};

// Exogenous input: constant c, or ramp r * t.
struct Drive {
  enum Kind { constant, ramp } kind = constant;
  double value = 0.0;

  double operator()(double t) const { return kind == constant ? value : value * t; }
  friend bool operator==(const Drive &, const Drive &) = default;
};

struct Shock {
  VariableId target;
  double time = 0.0;
  enum Mode { set, add } mode = set;
  double value = 0.0;

  friend bool operator==(const Shock &, const Shock &) = default;
};

inline constexpr double kDefaultDecay = 0.1;
inline constexpr double kDefaultGain = 1.0;
inline constexpr double kDefaultInit = 1.0;

struct ScenarioSpec {
  std::string name;
  double horizon = 1.0;
  double dt = 0.1;
  Integrator integrator = Integrator::rk4;
  std::map<VariableId, double> init;
  std::map<EdgeKey, double> gains;
  std::map<VariableId, double> decay;
  std::map<VariableId, Form> forms;
  std::map<VariableId, Drive> drives;
  std::vector<Shock> shocks;
  std::vector<VariableId> outputs;  // empty: every variable

  friend bool operator==(const ScenarioSpec &, const ScenarioSpec &) = default;
};

struct ScenarioParseResult {
  std::optional<ScenarioSpec> spec;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return spec.has_value(); }
};

// Line-oriented scenario format:
//   scenario "<name>"
//   horizon <float> step <float> integrator euler|rk4
//   init <id> <float>          gain <id> -> <id> <float>
//   decay <id> <float>         form <id> linear|sat <K>
//   drive <id> constant <float>|ramp <float>
//   shock <id> at <float> set|add <float>
//   output <id> ...
ScenarioParseResult parse_scenario(std::string_view source);

// Numeric and referential checks against a model. Throws invalid_scenario
// for bad numbers (dt > horizon, negative gain, ...) and unknown_reference
// for ids or links absent from the model.
void check_scenario(const ScenarioSpec &spec, const Model &model);

struct Trajectory {
  std::vector<double> times;
  std::map<VariableId, std::vector<double>> series;
  std::map<VariableId, std::string> names;
  std::vector<VariableId> outputs;
};

// Runnable ODE system. For each variable i
//   dx_i/dt = sum_{j->i} sign(j->i) gain(j->i) f_j(max(x_j, 0)) - decay_i x_i + drive_i(t)
// with levels clamped at zero after every step.
class CompiledSystem {
 public:
  const ScenarioSpec &spec() const { return spec_; }
  const std::vector<VariableId> &variables() const { return ids_; }

  // Derivative of every variable at (t, state); state is indexed like variables().
  std::vector<double> derivative(double t, const std::vector<double> &state) const;

  // Test hook: copy whose realized influence along `link` has the wrong sign.
  CompiledSystem with_sign_fault(EdgeKey link) const;

  struct Term {
    std::size_t source = 0;
    double weight = 0.0;  // sign * gain
    Polarity polarity = Polarity::plus;
  };

  // Incoming influence terms of variable index i.
  const std::vector<Term> &inflow_terms(std::size_t i) const { return inflows_.at(i); }

 private:
  friend CompiledSystem compile(const Model &model, const ScenarioSpec &spec);
  friend Trajectory integrate(const CompiledSystem &system);

  ScenarioSpec spec_;
  std::vector<VariableId> ids_;
  std::vector<std::string> names_;
  std::vector<std::vector<Term>> inflows_;  // per target
  std::vector<Form> forms_;
  std::vector<double> decay_;
  std::vector<std::optional<Drive>> drives_;
  std::vector<double> init_;
};

// Throws unknown_polarity, unknown_reference or invalid_scenario.
CompiledSystem compile(const Model &model, const ScenarioSpec &spec);

// Fixed-step integration over [0, horizon]. Shocks fire at the first grid
// time >= their time. Throws numeric_blowup on a non-finite level.
Trajectory integrate(const CompiledSystem &system);

struct SignMismatch {
  EdgeKey link;
  Polarity expected = Polarity::plus;
  double estimate = 0.0;
};

// Central finite-difference sign check of d(dx_i/dt)/dx_j for every link
// j->i, at the given (strictly positive) levels and t = 0. Links with zero
// gain carry no influence and are skipped.
std::vector<SignMismatch> jacobian_sign_check(const CompiledSystem &system,
                                              const std::map<VariableId, double> &state);

// CSV with header "t,<id:name>,..." and 9 significant digits.
// Throws unknown_reference for ids missing from the trajectory.
std::string export_csv(const Trajectory &trajectory, const std::vector<VariableId> &outputs);

}  // namespace cld
