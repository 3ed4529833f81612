#include "gridform/simcore/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gridform/simcore/errors.hpp"

namespace gridform::simcore {

Simulator::Simulator(network::Network net, std::vector<std::unique_ptr<Device>> devices,
                     EngineConfig config)
    : net_(std::move(net)), devices_(std::move(devices)), config_(config) {
  if (!(config_.dt > 0.0)) throw Error("time step must be positive");
  std::size_t offset = 0;
  layout_.resize(devices_.size());
  for (std::size_t k = 0; k < devices_.size(); ++k) {
    for (std::size_t j = 0; j < k; ++j)
      if (devices_[j]->id() == devices_[k]->id()) throw Error("duplicate device id " + devices_[k]->id());
    if (devices_[k]->bus() >= net_.bus_count()) throw Error(devices_[k]->id() + ": bus out of range");
    layout_[k].offset = offset;
    layout_[k].size = devices_[k]->state_size();
    offset += layout_[k].size;
  }
  x_.assign(offset, 0.0);
  for (std::size_t k = 0; k < devices_.size(); ++k)
    devices_[k]->initialize(std::span<double>(x_).subspan(layout_[k].offset, layout_[k].size));
}

StageContext Simulator::context(double t) const {
  return {t, 2.0 * std::numbers::pi * config_.f_base, config_.f_base, settling_};
}

std::size_t Simulator::index_of(const std::string& id) const {
  for (std::size_t k = 0; k < devices_.size(); ++k)
    if (devices_[k]->id() == id) return k;
  throw UnknownId(id);
}

const Device& Simulator::device(const std::string& id) const { return *devices_[index_of(id)]; }

std::span<const double> Simulator::device_state(const std::string& id) const {
  const auto& l = layout_[index_of(id)];
  return std::span<const double>(x_).subspan(l.offset, l.size);
}

network::Solution Simulator::solve_at(const std::vector<double>& x, double t) {
  network::Structure st;
  network::StageInputs in;
  const auto ctx = context(t);
  for (std::size_t k = 0; k < devices_.size(); ++k) {
    auto& l = layout_[k];
    l.norton = st.nortons.size();
    l.ideal = st.ideal_sources.size();
    l.power = in.powers.size();
    l.current = in.currents.size();
    devices_[k]->structure(st);
    devices_[k]->stage_inputs(std::span<const double>(x).subspan(l.offset, l.size), ctx, in);
    l.n_norton = st.nortons.size() - l.norton;
    l.n_ideal = st.ideal_sources.size() - l.ideal;
    l.n_power = in.powers.size() - l.power;
    l.n_current = in.currents.size() - l.current;
    if (in.norton_emf.size() != st.nortons.size() || in.ideal_v.size() != st.ideal_sources.size())
      throw Error(devices_[k]->id() + ": stage inputs do not match its structure");
  }
  for (const auto& e : in.powers)
    if (std::find(st.source_buses.begin(), st.source_buses.end(), e.bus) == st.source_buses.end() &&
        e.s.real() > 0.0)
      st.source_buses.push_back(e.bus);
  auto sol = solver_.solve(net_, st, in, warm_.empty() ? nullptr : &warm_);
  warm_ = sol.v;
  return sol;
}

PortSolution Simulator::port_of(std::size_t k, const network::Solution& sol) const {
  const auto& l = layout_[k];
  PortSolution p;
  p.v_bus = sol.v[devices_[k]->bus()];
  p.norton_current = std::span<const Phasor>(sol.norton_current).subspan(l.norton, l.n_norton);
  p.ideal_current = std::span<const Phasor>(sol.ideal_current).subspan(l.ideal, l.n_ideal);
  p.power_current = std::span<const Phasor>(sol.power_current).subspan(l.power, l.n_power);
  p.fixed_current = std::span<const Phasor>(sol.fixed_current).subspan(l.current, l.n_current);
  return p;
}

void Simulator::derivatives_at(const std::vector<double>& x, double t, const network::Solution& sol,
                               std::vector<double>& dx) const {
  const auto ctx = context(t);
  dx.assign(x.size(), 0.0);
  for (std::size_t k = 0; k < devices_.size(); ++k) {
    const auto& l = layout_[k];
    devices_[k]->derivatives(std::span<const double>(x).subspan(l.offset, l.size), ctx,
                             port_of(k, sol), std::span<double>(dx).subspan(l.offset, l.size));
  }
}

const network::Solution& Simulator::solution() {
  if (!cached_) cached_ = solve_at(x_, time());
  return *cached_;
}

PortSolution Simulator::port(std::size_t k) {
  const auto& sol = solution();
  return port_of(k, sol);
}

void Simulator::check_divergence(const std::vector<double>& x, double t) const {
  for (std::size_t k = 0; k < devices_.size(); ++k) {
    const auto& l = layout_[k];
    for (std::size_t i = 0; i < l.size; ++i) {
      const double v = x[l.offset + i];
      if (!std::isfinite(v) || std::abs(v) > config_.divergence_threshold)
        throw NumericalDivergence(t, devices_[k]->id() + " state " + std::to_string(i));
    }
  }
}

void Simulator::advance() {
  const double dt = config_.dt;
  const double t = time();
  const std::size_t n = x_.size();
  std::vector<double> k1, k2, k3, k4, xs(n);

  derivatives_at(x_, t, solution(), k1);
  for (std::size_t i = 0; i < n; ++i) xs[i] = x_[i] + 0.5 * dt * k1[i];
  derivatives_at(xs, t + 0.5 * dt, solve_at(xs, t + 0.5 * dt), k2);
  for (std::size_t i = 0; i < n; ++i) xs[i] = x_[i] + 0.5 * dt * k2[i];
  derivatives_at(xs, t + 0.5 * dt, solve_at(xs, t + 0.5 * dt), k3);
  for (std::size_t i = 0; i < n; ++i) xs[i] = x_[i] + dt * k3[i];
  derivatives_at(xs, t + dt, solve_at(xs, t + dt), k4);
  for (std::size_t i = 0; i < n; ++i)
    xs[i] = x_[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

  check_divergence(xs, t + dt);
  x_ = std::move(xs);
  ++step_;
  cached_.reset();
  const auto& sol = solution();
  const auto ctx = context(time());
  for (std::size_t k = 0; k < devices_.size(); ++k) {
    const auto& l = layout_[k];
    devices_[k]->after_step(std::span<double>(x_).subspan(l.offset, l.size), ctx, dt,
                            port_of(k, sol));
  }
}

void Simulator::settle(double duration) {
  if (duration < 0.0) throw Error("settle duration must be non-negative");
  const auto steps = static_cast<long long>(std::llround(duration / config_.dt));
  settling_ = true;
  step_ = -steps;
  cached_.reset();
  while (step_ < 0) advance();
  settling_ = false;
  step_ = 0;
  cached_.reset();
  const auto& sol = solution();
  const auto ctx = context(0.0);
  for (std::size_t k = 0; k < devices_.size(); ++k) {
    const auto& l = layout_[k];
    devices_[k]->end_settle(std::span<double>(x_).subspan(l.offset, l.size), ctx, port_of(k, sol));
  }
  cached_.reset();
}

void Simulator::schedule(std::vector<SimEvent> events) {
  for (const auto& e : events)
    if (e.time < 0.0) throw Error("event times must be non-negative: " + describe(e.action));
  queue_.emplace(std::move(events));
}

void Simulator::step() {
  if (queue_ && !queue_->empty()) {
    const auto due = queue_->due(time(), config_.dt);
    for (const auto& ev : due) {
      if (net_.apply(ev.action)) {
        cached_.reset();
        continue;
      }
      std::string target;
      if (const auto* sr = std::get_if<SetReference>(&ev.action)) target = sr->device;
      if (const auto* sm = std::get_if<SwitchMode>(&ev.action)) target = sm->device;
      const std::size_t k = index_of(target);
      const auto& l = layout_[k];
      const auto p = port(k);
      devices_[k]->handle(ev.action, std::span<double>(x_).subspan(l.offset, l.size),
                          context(time()), p);
      cached_.reset();
    }
  }
  advance();
}

std::vector<std::string> Simulator::channel_names() const {
  std::vector<std::string> names;
  for (const auto& d : devices_)
    for (const auto& c : d->channels()) names.push_back(d->id() + "." + c);
  for (const auto& b : net_.buses()) names.push_back(b.id + ".V");
  std::sort(names.begin(), names.end());
  return names;
}

Channels Simulator::sample() {
  const auto& sol = solution();
  const auto ctx = context(time());
  Channels out;
  for (std::size_t k = 0; k < devices_.size(); ++k) {
    const auto& l = layout_[k];
    Channels c;
    devices_[k]->outputs(std::span<const double>(x_).subspan(l.offset, l.size), ctx,
                         port_of(k, sol), c);
    for (const auto& [name, v] : c) out[devices_[k]->id() + "." + name] = v;
  }
  for (std::size_t b = 0; b < net_.bus_count(); ++b) out[net_.bus(b).id + ".V"] = std::abs(sol.v[b]);
  return out;
}

Simulator::Balance Simulator::power_balance() {
  const auto& sol = solution();
  Balance bal;
  for (std::size_t k = 0; k < devices_.size(); ++k) bal.injected += devices_[k]->injected_power(port_of(k, sol));
  for (const auto& line : net_.lines()) {
    if (!line.closed) continue;
    const auto a = sol.v[net_.bus_index(line.from)];
    const auto b = sol.v[net_.bus_index(line.to)];
    const auto i = (a - b) / Phasor(line.r, line.x);
    bal.losses += std::norm(i) * line.r;
  }
  for (std::size_t b = 0; b < net_.bus_count(); ++b)
    if (const auto& f = net_.bus(b).fault; f && std::abs(*f) > 0.0)
      bal.losses += std::norm(sol.v[b]) * std::real(1.0 / *f);
  return bal;
}

std::vector<double> Simulator::derivative() {
  std::vector<double> dx;
  derivatives_at(x_, time(), solution(), dx);
  return dx;
}

std::string to_string(RunVerdict::Kind kind) {
  switch (kind) {
    case RunVerdict::Kind::stable: return "stable";
    case RunVerdict::Kind::unstable: return "unstable";
    case RunVerdict::Kind::limit_violation: return "limit_violation";
  }
  return "unknown";
}

RunResult run(Simulator& sim, const RunPlan& plan) {
  const double dt = sim.config().dt;
  if (plan.duration < 0.0) throw Error("duration must be non-negative");
  const auto every = std::max<long long>(1, std::llround(plan.sample_interval / dt));
  if (std::abs(static_cast<double>(every) * dt - plan.sample_interval) > 1e-9 * plan.sample_interval)
    throw Error("sample interval must be a multiple of the time step");

  RunResult result{TimeSeries(static_cast<double>(every) * dt, plan.scenario_id), {}};
  const auto steps = static_cast<long long>(std::llround(plan.duration / dt));
  const auto all = sim.channel_names();
  if (steps == 0 && sim.device_count() == 0) return result;
  for (const auto& n : plan.channels)
    if (!std::binary_search(all.begin(), all.end(), n)) throw UnknownId(n);
  const auto& names = plan.channels.empty() ? all : plan.channels;
  for (const auto& n : names) result.series.add_channel(n);

  std::vector<double> outside(plan.limits.size(), 0.0);
  auto fail = [&](RunVerdict::Kind kind, double t, std::string detail) {
    result.verdict = {kind, t, std::move(detail)};
  };
  try {
    sim.settle(plan.settle);
    sim.schedule(plan.events);
    for (long long k = 0;; ++k) {
      if (k % every == 0) {
        const auto s = sim.sample();
        if (plan.channels.empty()) {
          result.series.append(s);
        } else {
          std::map<std::string, double> kept;
          for (const auto& n : plan.channels) kept[n] = s.at(n);
          result.series.append(kept);
        }
        for (std::size_t i = 0; i < plan.limits.size(); ++i) {
          const auto& lim = plan.limits[i];
          const auto it = s.find(lim.channel);
          if (it == s.end()) throw UnknownId(lim.channel);
          const bool out = sim.time() >= lim.after && (it->second < lim.lo || it->second > lim.hi);
          outside[i] = out ? outside[i] + static_cast<double>(every) * dt : 0.0;
          if (out && outside[i] > lim.hold) {
            fail(RunVerdict::Kind::limit_violation, sim.time(),
                 lim.channel + " outside [" + std::to_string(lim.lo) + ", " +
                     std::to_string(lim.hi) + "]");
            return result;
          }
        }
      }
      if (k >= steps) break;
      sim.step();
    }
  } catch (const NumericalDivergence& e) {
    fail(RunVerdict::Kind::unstable, e.time(), e.what());
  } catch (const IslandWithoutFormingSource& e) {
    fail(RunVerdict::Kind::unstable, sim.time() + dt, e.what());
  } catch (const NonConvergence& e) {
    fail(RunVerdict::Kind::unstable, sim.time() + dt, e.what());
  } catch (const SingularNetwork& e) {
    fail(RunVerdict::Kind::unstable, sim.time() + dt, e.what());
  }
  return result;
}

}  // namespace gridform::simcore
