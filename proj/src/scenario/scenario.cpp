#include "gridform/scenario/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <json.hpp>

#include "gridform/simcore/errors.hpp"

namespace gridform::scenario {

using nlohmann::json;

namespace {

// One field list per parameter block drives both reading and writing.

class Reader {
 public:
  Reader(const json& obj, std::string path, std::vector<std::string>& errors)
      : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (!obj_.is_object()) errors_.push_back(path_ + ": expected an object");
  }

  void field(const char* key, double& v) {
    const json* j = take(key);
    if (!j) return;
    if (j->is_number()) {
      v = j->get<double>();
      if (!std::isfinite(v)) fail(key, "must be finite");
    } else {
      fail(key, "expected a number");
    }
  }
  void field(const char* key, bool& v) {
    const json* j = take(key);
    if (!j) return;
    if (j->is_boolean()) v = j->get<bool>();
    else fail(key, "expected true or false");
  }
  void field(const char* key, std::string& v) {
    const json* j = take(key);
    if (!j) return;
    if (j->is_string()) v = j->get<std::string>();
    else fail(key, "expected a string");
  }
  void field(const char* key, std::optional<double>& v) {
    const json* j = take(key);
    if (!j) return;
    if (j->is_null()) v.reset();
    else if (j->is_number()) v = j->get<double>();
    else fail(key, "expected a number");
  }
  void field(const char* key, std::vector<std::string>& v) {
    const json* j = take(key);
    if (!j) return;
    if (j->is_array() &&
        std::all_of(j->begin(), j->end(), [](const json& c) { return c.is_string(); }))
      v = j->get<std::vector<std::string>>();
    else
      fail(key, "expected an array of strings");
  }
  /// Mark a key as handled elsewhere.
  void claim(const char* key) { used_.insert(key); }
  template <class T>
  void block(const char* key, T& v) {
    const json* j = take(key);
    if (!j) return;
    Reader sub(*j, path_ + "." + key, errors_);
    if (j->is_object()) {
      visit(sub, v);
      sub.finish();
    }
  }
  template <class T>
  void block(const char* key, std::optional<T>& v) {
    const json* j = take(key);
    if (!j || j->is_null()) return;
    Reader sub(*j, path_ + "." + key, errors_);
    if (j->is_object()) {
      v.emplace();
      visit(sub, *v);
      sub.finish();
    }
  }

  void finish() {
    if (!obj_.is_object()) return;
    for (const auto& [k, _] : obj_.items())
      if (!used_.count(k)) errors_.push_back(path_ + ": unknown field '" + k + "'");
  }

 private:
  const json* take(const char* key) {
    used_.insert(key);
    if (!obj_.is_object()) return nullptr;
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }
  void fail(const char* key, const char* what) {
    errors_.push_back(path_ + "." + key + ": " + what);
  }

  const json& obj_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> used_;
};

class Writer {
 public:
  explicit Writer(json& out) : out_(out) { out_ = json::object(); }

  void field(const char* key, double v) { out_[key] = v; }
  void field(const char* key, bool v) { out_[key] = v; }
  void field(const char* key, const std::string& v) { out_[key] = v; }
  void field(const char* key, const std::vector<std::string>& v) { out_[key] = v; }
  void field(const char* key, const std::optional<double>& v) {
    if (v) out_[key] = *v;
  }
  template <class T>
  void block(const char* key, T& v) {
    Writer sub(out_[key]);
    visit(sub, v);
  }
  template <class T>
  void block(const char* key, std::optional<T>& v) {
    if (!v) return;
    Writer sub(out_[key]);
    visit(sub, *v);
  }

 private:
  json& out_;
};

template <class V>
void visit(V& v, devices::PllParams& p) {
  v.field("k_p", p.k_p);
  v.field("k_i", p.k_i);
}

template <class V>
void visit(V& v, control::OperatingEnvelope& e) {
  v.field("p_min", e.p_min);
  v.field("p_max", e.p_max);
  v.field("q_min", e.q_min);
  v.field("q_max", e.q_max);
  v.field("omega_min", e.omega_min);
  v.field("omega_max", e.omega_max);
  v.field("v_min", e.v_min);
  v.field("v_max", e.v_max);
  v.field("i_n", e.i_n);
  v.field("rocof_max", e.rocof_max);
}

template <class V>
void visit(V& v, control::DcSideParams& p) {
  v.field("c_dc", p.c_dc);
  v.field("r_h", p.r_h);
  v.field("v_h_min", p.v_h_min);
  v.field("v_h_max", p.v_h_max);
  v.field("v_t_nominal", p.v_t_nominal);
  v.field("k_p", p.k_p);
  v.field("k_i", p.k_i);
}

template <class V>
void visit(V& v, control::GfmConverterParams& p) {
  v.field("s_n", p.s_n);
  v.field("l_f", p.l_f);
  v.field("r_f", p.r_f);
  v.field("c_f", p.c_f);
  v.field("r_t", p.r_t);
  v.field("x_t", p.x_t);
  v.field("tau_s", p.tau_s);
  v.field("d_v", p.d_v);
  v.field("omega_v", p.omega_v);
  v.field("tau_p", p.tau_p);
  v.field("tau_q", p.tau_q);
  v.field("k_p", p.k_p);
  v.field("k_q", p.k_q);
  v.block("envelope", p.envelope);
  v.field("k_envelope", p.k_envelope);
  v.field("k_secondary_f", p.k_secondary_f);
  v.field("k_secondary_v", p.k_secondary_v);
  v.field("rate_tau", p.rate_tau);
  v.block("dc", p.dc);
  v.field("flex_hold", p.flex_hold);
  v.field("p_ref", p.p_ref);
  v.field("q_ref", p.q_ref);
  v.field("v_ref", p.v_ref);
  v.field("omega_ref", p.omega_ref);
  v.field("mode", p.mode);
}

template <class V>
void visit(V& v, devices::GflParams& p) {
  v.field("s_n", p.s_n);
  v.field("p_available", p.p_available);
  v.field("p_cmd", p.p_cmd);
  v.field("q_ref", p.q_ref);
  v.field("i_n", p.i_n);
  v.field("tau_s", p.tau_s);
  v.field("ramp_rate", p.ramp_rate);
  v.field("lvpl_v0", p.lvpl_v0);
  v.field("lvpl_v1", p.lvpl_v1);
  v.block("pll", p.pll);
  v.field("lost_sync_v", p.lost_sync_v);
  v.field("lost_sync_hold", p.lost_sync_hold);
}

template <class V>
void visit(V& v, devices::TheveninParams& p) {
  v.field("scr", p.scr);
  v.field("x_over_r", p.x_over_r);
  v.field("h", p.h);
  v.field("s_g", p.s_g);
  v.field("d", p.d);
  v.field("e", p.e);
}

template <class V>
void visit(V& v, devices::FixedPqParams& p) {
  v.field("p", p.p);
  v.field("q", p.q);
  v.field("v_min", p.v_min);
  v.field("on", p.on);
}

template <class V>
void visit(V& v, devices::FreqSupportParams& p) {
  v.field("p_nominal", p.p_nominal);
  v.field("q", p.q);
  v.field("k_fl", p.k_fl);
  v.field("tau_f", p.tau_f);
  v.field("v_min", p.v_min);
  v.block("pll", p.pll);
  v.field("on", p.on);
}

template <class V>
void visit(V& v, devices::SyncGenParams& p) {
  v.field("s_n", p.s_n);
  v.field("h", p.h);
  v.field("d", p.d);
  v.field("d_damper", p.d_damper);
  v.field("t_damper", p.t_damper);
  v.field("x_d", p.x_d);
  v.field("r_a", p.r_a);
  v.field("p_ref", p.p_ref);
  v.field("v_set", p.v_set);
  v.field("r_gov", p.r_gov);
  v.field("t_gov", p.t_gov);
  v.field("k_avr", p.k_avr);
  v.field("on", p.on);
}

template <class V>
void visit(V& v, RenewableSpec& r) {
  v.field("start_mode", r.start_mode);
  v.block("gfm", r.gfm);
  v.block("gfl", r.gfl);
}

template <class V>
void visit(V& v, control::BlackstartPlan& p) {
  v.field("load_device", p.load_device);
  v.field("renewable_device", p.renewable_device);
  v.field("t_start", p.t_start);
  v.field("voltage_ramp", p.voltage_ramp);
  v.field("t_engage", p.t_engage);
  v.field("setpoint_ramp", p.setpoint_ramp);
  v.field("load_setpoint", p.load_setpoint);
  v.field("t_handover", p.t_handover);
  v.field("v_nominal", p.v_nominal);
}

template <class V>
void visit(V& v, simcore::ChannelLimit& l) {
  v.field("channel", l.channel);
  v.field("lo", l.lo);
  v.field("hi", l.hi);
  v.field("hold", l.hold);
  v.field("after", l.after);
}

template <class V>
void visit(V& v, OutputSpec& o) {
  v.field("sample_interval", o.sample_interval);
  v.field("frequency_channel", o.frequency_channel);
  v.field("channels", o.channels);
}

template <class V>
void visit(V& v, network::Line& l) {
  v.field("id", l.id);
  v.field("from", l.from);
  v.field("to", l.to);
  v.field("r", l.r);
  v.field("x", l.x);
  v.field("b", l.b);
  v.field("closed", l.closed);
}

const std::vector<std::string> kDeviceTypes = {"thevenin", "fixed_pq", "freq_support", "gfm_load",
                                               "mppt", "gfm", "sync_gen"};

DeviceParams default_params(const std::string& type) {
  if (type == "thevenin") return devices::TheveninParams{};
  if (type == "fixed_pq") return devices::FixedPqParams{};
  if (type == "freq_support") return devices::FreqSupportParams{};
  if (type == "gfm_load") return control::GfmConverterParams{};
  if (type == "sync_gen") return devices::SyncGenParams{};
  RenewableSpec r;
  r.gfm.role = control::GfmRole::source;
  r.start_mode = type == "gfm" ? "gfm" : "mppt";
  return r;
}

// Event (de)serialization.

simcore::SimEvent read_event(const json& j, const std::string& path, std::vector<std::string>& errors) {
  simcore::SimEvent ev;
  Reader r(j, path, errors);
  std::string type;
  r.field("t", ev.time);
  r.field("type", type);
  if (type == "open_breaker" || type == "close_breaker") {
    std::string line;
    r.field("line", line);
    if (type == "open_breaker") ev.action = simcore::OpenBreaker{line};
    else ev.action = simcore::CloseBreaker{line};
  } else if (type == "apply_fault") {
    simcore::ApplyFault f;
    r.field("bus", f.bus);
    r.field("r", f.r);
    r.field("x", f.x);
    ev.action = f;
  } else if (type == "clear_fault") {
    simcore::ClearFault f;
    r.field("bus", f.bus);
    ev.action = f;
  } else if (type == "set_reference") {
    simcore::SetReference s;
    r.field("device", s.device);
    r.field("name", s.name);
    r.field("value", s.value);
    r.field("ramp", s.ramp);
    ev.action = s;
  } else if (type == "switch_mode") {
    simcore::SwitchMode s;
    r.field("device", s.device);
    r.field("mode", s.mode);
    ev.action = s;
  } else {
    errors.push_back(path + ": unknown event type '" + type + "'");
    return ev;
  }
  r.finish();
  return ev;
}

json write_event(const simcore::SimEvent& ev) {
  json j;
  j["t"] = ev.time;
  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, simcore::OpenBreaker>) {
          j["type"] = "open_breaker";
          j["line"] = a.line;
        } else if constexpr (std::is_same_v<T, simcore::CloseBreaker>) {
          j["type"] = "close_breaker";
          j["line"] = a.line;
        } else if constexpr (std::is_same_v<T, simcore::ApplyFault>) {
          j["type"] = "apply_fault";
          j["bus"] = a.bus;
          j["r"] = a.r;
          j["x"] = a.x;
        } else if constexpr (std::is_same_v<T, simcore::ClearFault>) {
          j["type"] = "clear_fault";
          j["bus"] = a.bus;
        } else if constexpr (std::is_same_v<T, simcore::SetReference>) {
          j["type"] = "set_reference";
          j["device"] = a.device;
          j["name"] = a.name;
          j["value"] = a.value;
          j["ramp"] = a.ramp;
        } else {
          j["type"] = "switch_mode";
          j["device"] = a.device;
          j["mode"] = a.mode;
        }
      },
      ev.action);
  return j;
}

void check_gfm(const control::GfmConverterParams& p, const std::string& path,
               std::vector<std::string>& errors) {
  if (!(p.s_n > 0.0)) errors.push_back(path + ": s_n must be positive");
  if (!(p.l_f > 0.0) || !(p.c_f > 0.0) || p.r_f < 0.0)
    errors.push_back(path + ": filter needs l_f > 0, c_f > 0, r_f >= 0");
  if (!(p.tau_s > 0.0) || !(p.tau_p > 0.0) || !(p.tau_q > 0.0) || !(p.d_v > 0.0))
    errors.push_back(path + ": tau_s, tau_p, tau_q and d_v must be positive");
  if (p.mode != "droop" && p.mode != "voltage_ramp" && p.mode != "off")
    errors.push_back(path + ": mode must be droop, voltage_ramp or off");
  try {
    p.envelope.validate();
  } catch (const ValidationError& e) {
    for (const auto& m : e.problems()) errors.push_back(path + ".envelope: " + m);
  }
}

}  // namespace

bool ScenarioSpec::operator==(const ScenarioSpec& o) const {
  return id == o.id && base == o.base && duration == o.duration && dt == o.dt &&
         settle == o.settle && buses == o.buses && lines == o.lines && devices == o.devices &&
         events == o.events && blackstart == o.blackstart && limits == o.limits &&
         outputs == o.outputs && expect_stable == o.expect_stable;
}

std::vector<simcore::SimEvent> ScenarioSpec::all_events() const {
  std::vector<simcore::SimEvent> ev = events;
  if (blackstart) {
    const auto extra = control::BlackstartSequence(*blackstart).events();
    ev.insert(ev.end(), extra.begin(), extra.end());
  }
  simcore::order_events(ev);
  return ev;
}

const DeviceSpec* ScenarioSpec::device(const std::string& name) const {
  for (const auto& d : devices)
    if (d.id == name) return &d;
  return nullptr;
}

bool is_forming_type(const DeviceSpec& d) {
  if (d.type == "thevenin" || d.type == "sync_gen") return true;
  if (d.type == "gfm_load") return std::get<control::GfmConverterParams>(d.params).mode != "off";
  if (d.type == "gfm" || d.type == "mppt") {
    const auto& r = std::get<RenewableSpec>(d.params);
    return r.start_mode == "gfm" || r.start_mode == "voltage_ramp";
  }
  return false;
}

std::vector<std::string> validate(const ScenarioSpec& s) {
  std::vector<std::string> errors;
  if (s.id.empty()) errors.push_back("id: must not be empty");
  if (!(s.duration > 0.0)) errors.push_back("duration: must be positive");
  if (!(s.dt > 0.0)) errors.push_back("dt: must be positive");
  if (s.settle < 0.0) errors.push_back("settle: must be non-negative");
  if (!(s.base.s_base() > 0.0) || !(s.base.v_base() > 0.0) || !(s.base.f_base() > 0.0))
    errors.push_back("base: s_base, v_base and f_base must be positive");
  if (s.dt > 0.0) {
    const double ratio = s.outputs.sample_interval / s.dt;
    if (!(ratio >= 1.0) || std::abs(ratio - std::round(ratio)) > 1e-6)
      errors.push_back("outputs.sample_interval: must be a whole multiple of dt");
  }

  std::set<std::string> buses;
  for (const auto& b : s.buses)
    if (!buses.insert(b.id).second) errors.push_back("buses: duplicate id " + b.id);
  if (s.buses.empty()) errors.push_back("buses: at least one bus is required");
  std::set<std::string> lines;
  for (const auto& l : s.lines) {
    if (!lines.insert(l.id).second) errors.push_back("lines: duplicate id " + l.id);
    if (!buses.count(l.from)) errors.push_back("lines." + l.id + ": unknown bus " + l.from);
    if (!buses.count(l.to)) errors.push_back("lines." + l.id + ": unknown bus " + l.to);
    if (l.r < 0.0 || l.x < 0.0 || (l.r == 0.0 && l.x == 0.0))
      errors.push_back("lines." + l.id + ": needs r >= 0, x >= 0 and a non-zero impedance");
  }

  std::set<std::string> devices;
  bool forming = false;
  for (const auto& d : s.devices) {
    const std::string path = "devices." + d.id;
    if (d.id.empty()) errors.push_back("devices: empty id");
    if (!devices.insert(d.id).second) errors.push_back("devices: duplicate id " + d.id);
    if (!buses.count(d.bus)) errors.push_back(path + ": unknown bus " + d.bus);
    if (std::find(kDeviceTypes.begin(), kDeviceTypes.end(), d.type) == kDeviceTypes.end()) {
      errors.push_back(path + ": unknown type " + d.type);
      continue;
    }
    if (d.type == "gfm_load") check_gfm(std::get<control::GfmConverterParams>(d.params), path, errors);
    if (d.type == "gfm" || d.type == "mppt") {
      const auto& r = std::get<RenewableSpec>(d.params);
      check_gfm(r.gfm, path + ".gfm", errors);
      if (r.start_mode != "gfm" && r.start_mode != "voltage_ramp" && r.start_mode != "mppt" &&
          r.start_mode != "off")
        errors.push_back(path + ": start_mode must be gfm, voltage_ramp, mppt or off");
      if (r.gfl.p_available < 0.0) errors.push_back(path + ".gfl: p_available must be non-negative");
    }
    if (d.type == "sync_gen") {
      const auto& g = std::get<devices::SyncGenParams>(d.params);
      if (!(g.s_n > 0.0) || !(g.h > 0.0) || !(g.x_d > 0.0))
        errors.push_back(path + ": s_n, h and x_d must be positive");
    }
    if (d.type == "freq_support" && std::get<devices::FreqSupportParams>(d.params).k_fl < 0.0)
      errors.push_back(path + ": k_fl must be non-negative");
    forming = forming || is_forming_type(d);
  }
  if (!forming) errors.push_back("devices: no forming source");

  double last = -1e300;
  for (std::size_t k = 0; k < s.events.size(); ++k) {
    const auto& ev = s.events[k];
    const std::string path = "events[" + std::to_string(k) + "]";
    if (ev.time < 0.0 || ev.time > s.duration) errors.push_back(path + ": time outside [0, duration]");
    if (ev.time < last) errors.push_back(path + ": events must be in non-decreasing time order");
    last = std::max(last, ev.time);
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, simcore::OpenBreaker> ||
                        std::is_same_v<T, simcore::CloseBreaker>) {
            if (!lines.count(a.line)) errors.push_back(path + ": unknown line " + a.line);
          } else if constexpr (std::is_same_v<T, simcore::ApplyFault> ||
                               std::is_same_v<T, simcore::ClearFault>) {
            if (!buses.count(a.bus)) errors.push_back(path + ": unknown bus " + a.bus);
          } else {
            if (!devices.count(a.device)) errors.push_back(path + ": unknown device " + a.device);
          }
        },
        ev.action);
  }
  if (s.blackstart) {
    const auto& p = *s.blackstart;
    if (!devices.count(p.load_device)) errors.push_back("blackstart: unknown device " + p.load_device);
    if (!devices.count(p.renewable_device))
      errors.push_back("blackstart: unknown device " + p.renewable_device);
    try {
      control::BlackstartSequence seq(p);
    } catch (const Error& e) {
      errors.push_back(std::string("blackstart: ") + e.what());
    }
    if (p.t_handover > s.duration) errors.push_back("blackstart: handover after the end of the run");
  }
  for (const auto& l : s.limits)
    if (!(l.lo <= l.hi) || l.hold < 0.0) errors.push_back("limits." + l.channel + ": bad band or hold");
  return errors;
}

ScenarioSpec parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError({std::string("not valid JSON: ") + e.what()});
  }
  std::vector<std::string> errors;
  ScenarioSpec s;
  Reader top(doc, "scenario", errors);
  if (!doc.is_object()) throw ValidationError(errors);

  top.field("id", s.id);
  top.field("duration", s.duration);
  top.field("dt", s.dt);
  top.field("settle", s.settle);
  top.field("expect_stable", s.expect_stable);
  top.block("outputs", s.outputs);

  if (doc.contains("base")) {
    double sb = 1e6, vb = 400.0, fb = 50.0;
    Reader r(doc["base"], "base", errors);
    r.field("s_base", sb);
    r.field("v_base", vb);
    r.field("f_base", fb);
    r.finish();
    if (sb > 0.0 && vb > 0.0 && fb > 0.0) s.base = simcore::PerUnitBase(sb, vb, fb);
    else errors.push_back("base: s_base, v_base and f_base must be positive");
  }

  auto array_of = [&](const char* key) -> const json* {
    if (!doc.contains(key)) return nullptr;
    if (!doc[key].is_array()) {
      errors.push_back(std::string(key) + ": expected an array");
      return nullptr;
    }
    return &doc[key];
  };

  if (doc.contains("topology")) {
    const json& topo = doc["topology"];
    if (!topo.is_object()) errors.push_back("topology: expected an object");
    if (topo.is_object()) {
      if (topo.contains("buses") && topo["buses"].is_array()) {
        for (std::size_t k = 0; k < topo["buses"].size(); ++k) {
          network::Bus b;
          Reader r(topo["buses"][k], "topology.buses[" + std::to_string(k) + "]", errors);
          r.field("id", b.id);
          r.field("v_nominal", b.v_nominal);
          r.finish();
          s.buses.push_back(b);
        }
      } else {
        errors.push_back("topology.buses: expected an array");
      }
      if (topo.contains("lines")) {
        if (!topo["lines"].is_array()) errors.push_back("topology.lines: expected an array");
        else
          for (std::size_t k = 0; k < topo["lines"].size(); ++k) {
            network::Line l;
            Reader r(topo["lines"][k], "topology.lines[" + std::to_string(k) + "]", errors);
            visit(r, l);
            r.finish();
            s.lines.push_back(l);
          }
      }
      for (const auto& [k, _] : topo.items())
        if (k != "buses" && k != "lines") errors.push_back("topology: unknown field '" + k + "'");
    }
  } else {
    errors.push_back("topology: missing");
  }

  if (const json* devs = array_of("devices")) {
    for (std::size_t k = 0; k < devs->size(); ++k) {
      const json& j = (*devs)[k];
      const std::string path = "devices[" + std::to_string(k) + "]";
      DeviceSpec d;
      Reader r(j, path, errors);
      r.field("id", d.id);
      r.field("type", d.type);
      r.field("bus", d.bus);
      if (std::find(kDeviceTypes.begin(), kDeviceTypes.end(), d.type) == kDeviceTypes.end()) {
        errors.push_back(path + ": unknown type '" + d.type + "'");
        continue;
      }
      d.params = default_params(d.type);
      std::visit(
          [&](auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, RenewableSpec>) {
              visit(r, p);
              p.gfm.role = control::GfmRole::source;
            } else {
              r.block("params", p);
            }
          },
          d.params);
      r.finish();
      s.devices.push_back(std::move(d));
    }
  }

  if (const json* evs = array_of("events"))
    for (std::size_t k = 0; k < evs->size(); ++k)
      s.events.push_back(read_event((*evs)[k], "events[" + std::to_string(k) + "]", errors));

  if (doc.contains("blackstart")) {
    control::BlackstartPlan p;
    Reader r(doc["blackstart"], "blackstart", errors);
    visit(r, p);
    r.finish();
    s.blackstart = p;
  }

  if (const json* lims = array_of("limits"))
    for (std::size_t k = 0; k < lims->size(); ++k) {
      simcore::ChannelLimit l;
      Reader r((*lims)[k], "limits[" + std::to_string(k) + "]", errors);
      visit(r, l);
      r.finish();
      s.limits.push_back(l);
    }

  for (const char* k : {"topology", "devices", "events", "blackstart", "limits", "base"}) top.claim(k);
  top.finish();

  if (errors.empty()) {
    auto more = validate(s);
    errors.insert(errors.end(), more.begin(), more.end());
  }
  if (!errors.empty()) throw ValidationError(errors);
  return s;
}

std::string serialize(const ScenarioSpec& spec) {
  ScenarioSpec s = spec;
  json doc;
  doc["id"] = s.id;
  doc["base"] = {{"s_base", s.base.s_base()}, {"v_base", s.base.v_base()}, {"f_base", s.base.f_base()}};
  doc["duration"] = s.duration;
  doc["dt"] = s.dt;
  doc["settle"] = s.settle;
  doc["expect_stable"] = s.expect_stable;
  {
    Writer w(doc["outputs"]);
    visit(w, s.outputs);
  }
  json buses = json::array();
  for (const auto& b : s.buses) buses.push_back({{"id", b.id}, {"v_nominal", b.v_nominal}});
  json lines = json::array();
  for (auto& l : s.lines) {
    json j;
    Writer w(j);
    visit(w, l);
    lines.push_back(j);
  }
  doc["topology"] = {{"buses", buses}, {"lines", lines}};

  json devs = json::array();
  for (auto& d : s.devices) {
    json j;
    j["id"] = d.id;
    j["type"] = d.type;
    j["bus"] = d.bus;
    std::visit(
        [&](auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, RenewableSpec>) {
            json body;
            Writer w(body);
            visit(w, p);
            for (auto& [k, v] : body.items()) j[k] = v;
          } else {
            Writer w(j["params"]);
            visit(w, p);
          }
        },
        d.params);
    devs.push_back(j);
  }
  doc["devices"] = devs;

  json evs = json::array();
  for (const auto& e : s.events) evs.push_back(write_event(e));
  doc["events"] = evs;
  if (s.blackstart) {
    Writer w(doc["blackstart"]);
    visit(w, *s.blackstart);
  }
  json lims = json::array();
  for (auto& l : s.limits) {
    json j;
    Writer w(j);
    visit(w, l);
    lims.push_back(j);
  }
  doc["limits"] = lims;
  return doc.dump(2);
}

}  // namespace gridform::scenario
