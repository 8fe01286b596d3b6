#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cld/error.hpp"
#include "cld/sim.hpp"

namespace cld {

CompiledSystem compile(const Model &model, const ScenarioSpec &spec) {
  for (const auto &l : model.links())
    if (l.polarity == Polarity::unknown)
      throw Error(ErrorCode::unknown_polarity, "link " + to_string(l.key()) + " has unknown polarity");
  check_scenario(spec, model);

  CompiledSystem sys;
  sys.spec_ = spec;
  for (const auto &v : model.variables()) {
    sys.ids_.push_back(v.id);
    sys.names_.push_back(v.name);
    sys.forms_.push_back(spec.forms.count(v.id) ? spec.forms.at(v.id) : Form{});
    sys.decay_.push_back(spec.decay.count(v.id) ? spec.decay.at(v.id) : kDefaultDecay);
    sys.drives_.push_back(spec.drives.count(v.id) ? std::optional(spec.drives.at(v.id)) : std::nullopt);
    sys.init_.push_back(spec.init.count(v.id) ? spec.init.at(v.id) : kDefaultInit);
  }
  auto index = [&](VariableId id) {
    return static_cast<std::size_t>(std::lower_bound(sys.ids_.begin(), sys.ids_.end(), id) - sys.ids_.begin());
  };
  sys.inflows_.resize(sys.ids_.size());
  for (const auto &l : model.links()) {
    const double gain = spec.gains.count(l.key()) ? spec.gains.at(l.key()) : kDefaultGain;
    const double sign = l.polarity == Polarity::minus ? -1.0 : 1.0;
    sys.inflows_[index(l.to)].push_back({index(l.from), sign * gain, l.polarity});
  }
  return sys;
}

std::vector<double> CompiledSystem::derivative(double t, const std::vector<double> &state) const {
  std::vector<double> d(state.size(), 0.0);
  for (std::size_t i = 0; i < state.size(); ++i) {
    double rate = -decay_[i] * state[i];
    for (const auto &term : inflows_[i]) rate += term.weight * forms_[term.source](std::max(state[term.source], 0.0));
    if (drives_[i]) rate += (*drives_[i])(t);
    d[i] = rate;
  }
  return d;
}

CompiledSystem CompiledSystem::with_sign_fault(EdgeKey link) const {
  auto copy = *this;
  const auto target = std::lower_bound(ids_.begin(), ids_.end(), link.to) - ids_.begin();
  const auto source = std::lower_bound(ids_.begin(), ids_.end(), link.from) - ids_.begin();
  if (target >= static_cast<long>(ids_.size()) || ids_[target] != link.to)
    throw Error(ErrorCode::unknown_reference, "no link " + to_string(link));
  for (auto &term : copy.inflows_[target])
    if (term.source == static_cast<std::size_t>(source)) {
      term.weight = -term.weight;
      return copy;
    }
  throw Error(ErrorCode::unknown_reference, "no link " + to_string(link));
}

namespace {

std::vector<double> axpy(const std::vector<double> &x, double a, const std::vector<double> &y) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
  return out;
}

}  // namespace

Trajectory integrate(const CompiledSystem &system) {
  const auto &spec = system.spec_;
  const double dt = spec.dt;
  const auto steps = static_cast<std::size_t>(std::floor(spec.horizon / dt + 1e-9));
  const auto n = system.ids_.size();

  Trajectory traj;
  for (std::size_t i = 0; i < n; ++i) {
    traj.names[system.ids_[i]] = system.names_[i];
    traj.series[system.ids_[i]].reserve(steps + 1);
  }
  traj.outputs = spec.outputs.empty() ? system.ids_ : spec.outputs;
  traj.times.reserve(steps + 1);

  std::vector<bool> fired(spec.shocks.size(), false);
  auto apply_shocks = [&](double t, std::vector<double> &x) {
    for (std::size_t s = 0; s < spec.shocks.size(); ++s) {
      const auto &shock = spec.shocks[s];
      if (fired[s] || t < shock.time - 1e-9 * dt) continue;
      fired[s] = true;
      const auto i = std::lower_bound(system.ids_.begin(), system.ids_.end(), shock.target) - system.ids_.begin();
      x[i] = shock.mode == Shock::set ? shock.value : x[i] + shock.value;
      x[i] = std::max(x[i], 0.0);
    }
  };
  auto record = [&](double t, const std::vector<double> &x) {
    traj.times.push_back(t);
    for (std::size_t i = 0; i < n; ++i) traj.series[system.ids_[i]].push_back(x[i]);
  };

  auto x = system.init_;
  apply_shocks(0.0, x);
  record(0.0, x);
  for (std::size_t k = 1; k <= steps; ++k) {
    const double t0 = static_cast<double>(k - 1) * dt;
    const double t1 = static_cast<double>(k) * dt;
    if (spec.integrator == Integrator::euler) {
      x = axpy(x, dt, system.derivative(t0, x));
    } else {
      const auto k1 = system.derivative(t0, x);
      const auto k2 = system.derivative(t0 + dt / 2, axpy(x, dt / 2, k1));
      const auto k3 = system.derivative(t0 + dt / 2, axpy(x, dt / 2, k2));
      const auto k4 = system.derivative(t1, axpy(x, dt, k3));
      for (std::size_t i = 0; i < n; ++i) x[i] += dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(x[i])) {
        std::ostringstream os;
        os << "variable " << system.ids_[i].value << " became non-finite at t=" << t1;
        throw Error(ErrorCode::numeric_blowup, os.str());
      }
      x[i] = std::max(x[i], 0.0);
    }
    apply_shocks(t1, x);
    record(t1, x);
  }
  return traj;
}

std::vector<SignMismatch> jacobian_sign_check(const CompiledSystem &system,
                                              const std::map<VariableId, double> &state) {
  const auto &ids = system.variables();
  std::vector<double> x;
  for (auto id : ids) {
    auto it = state.find(id);
    if (it == state.end())
      throw Error(ErrorCode::invalid_argument, "state has no level for variable " + std::to_string(id.value));
    x.push_back(it->second);
  }

  std::vector<SignMismatch> out;
  for (std::size_t j = 0; j < ids.size(); ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(x[j]));
    auto up = x, down = x;
    up[j] += h;
    down[j] -= h;
    const auto fu = system.derivative(0.0, up);
    const auto fd = system.derivative(0.0, down);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i == j) continue;
      // Links j->i, found through the target's inflow list.
      const EdgeKey key{ids[j], ids[i]};
      std::optional<Polarity> polarity;
      bool live = false;
      for (const auto &term : system.inflow_terms(i))
        if (term.source == j) {
          polarity = term.polarity;
          live = term.weight != 0.0;
        }
      if (!polarity || !live) continue;
      const double estimate = (fu[i] - fd[i]) / (2 * h);
      const bool agrees = *polarity == Polarity::plus ? estimate > 0 : estimate < 0;
      if (!agrees) out.push_back({key, *polarity, estimate});
    }
  }
  std::sort(out.begin(), out.end(), [](const SignMismatch &a, const SignMismatch &b) { return a.link < b.link; });
  return out;
}

namespace {

std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string export_csv(const Trajectory &trajectory, const std::vector<VariableId> &outputs) {
  std::vector<const std::vector<double> *> columns;
  std::string out = "t";
  for (auto id : outputs) {
    auto it = trajectory.series.find(id);
    if (it == trajectory.series.end())
      throw Error(ErrorCode::unknown_reference, "trajectory has no series for variable " + std::to_string(id.value));
    columns.push_back(&it->second);
    auto name = trajectory.names.find(id);
    out += "," + csv_field(std::to_string(id.value) + ":" + (name == trajectory.names.end() ? "" : name->second));
  }
  out += "\n";
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    out += number(trajectory.times[k]);
    for (const auto *col : columns) out += "," + number((*col)[k]);
    out += "\n";
  }
  return out;
}

}  // namespace cld
