#include "gridform/network/network.hpp"

#include <cmath>
#include <json.hpp>

#include "gridform/simcore/errors.hpp"

namespace gridform::network {

std::size_t Network::add_bus(Bus bus) {
  if (bus_index_.count(bus.id)) throw Error("duplicate bus id: " + bus.id);
  if (bus.fault && std::abs(*bus.fault) < 0.0) throw Error("negative fault impedance");
  const std::size_t idx = buses_.size();
  bus_index_.emplace(bus.id, idx);
  buses_.push_back(std::move(bus));
  ++version_;
  return idx;
}

void Network::add_line(Line line) {
  for (const auto& l : lines_)
    if (l.id == line.id) throw Error("duplicate line id: " + line.id);
  if (!(line.r > 0.0 || line.x > 0.0)) throw Error("line " + line.id + " needs r > 0 or x > 0");
  if (line.r < 0.0 || line.x < 0.0) throw Error("line " + line.id + " has negative impedance");
  bus_index(line.from);
  bus_index(line.to);
  lines_.push_back(std::move(line));
  ++version_;
}

std::size_t Network::bus_index(const std::string& id) const {
  auto it = bus_index_.find(id);
  if (it == bus_index_.end()) throw UnknownId(id);
  return it->second;
}

const Line& Network::line(const std::string& id) const {
  for (const auto& l : lines_)
    if (l.id == id) return l;
  throw UnknownId(id);
}

Line& Network::mutable_line(const std::string& id) {
  for (auto& l : lines_)
    if (l.id == id) return l;
  throw UnknownId(id);
}

void Network::open_breaker(const std::string& id) {
  mutable_line(id).closed = false;
  ++version_;
}

void Network::close_breaker(const std::string& id) {
  mutable_line(id).closed = true;
  ++version_;
}

void Network::apply_fault(const std::string& bus, Phasor z) {
  if (z.real() < 0.0 || z.imag() < 0.0) throw Error("fault impedance must be non-negative");
  if (std::abs(z) == 0.0) throw Error("fault impedance must be nonzero");
  buses_[bus_index(bus)].fault = z;
  ++version_;
}

void Network::clear_fault(const std::string& bus) {
  buses_[bus_index(bus)].fault.reset();
  ++version_;
}

bool Network::apply(const simcore::EventAction& action) {
  if (auto* e = std::get_if<simcore::OpenBreaker>(&action)) {
    open_breaker(e->line);
    return true;
  }
  if (auto* e = std::get_if<simcore::CloseBreaker>(&action)) {
    close_breaker(e->line);
    return true;
  }
  if (auto* e = std::get_if<simcore::ApplyFault>(&action)) {
    apply_fault(e->bus, {e->r, e->x});
    return true;
  }
  if (auto* e = std::get_if<simcore::ClearFault>(&action)) {
    clear_fault(e->bus);
    return true;
  }
  return false;
}

Eigen::MatrixXcd Network::admittance() const {
  const auto n = static_cast<Eigen::Index>(buses_.size());
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& l : lines_) {
    if (!l.closed) continue;
    const auto i = static_cast<Eigen::Index>(bus_index(l.from));
    const auto j = static_cast<Eigen::Index>(bus_index(l.to));
    const Phasor ys = 1.0 / Phasor(l.r, l.x);
    const Phasor ysh(0.0, l.b / 2.0);
    y(i, i) += ys + ysh;
    y(j, j) += ys + ysh;
    y(i, j) -= ys;
    y(j, i) -= ys;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& f = buses_[static_cast<std::size_t>(i)].fault;
    if (f) y(i, i) += 1.0 / *f;
  }
  return y;
}

std::string Network::admittance_json() const {
  const auto y = admittance();
  nlohmann::json j;
  j["buses"] = nlohmann::json::array();
  for (const auto& b : buses_) j["buses"].push_back(b.id);
  j["real"] = nlohmann::json::array();
  j["imag"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < y.rows(); ++r) {
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (Eigen::Index c = 0; c < y.cols(); ++c) {
      re.push_back(y(r, c).real());
      im.push_back(y(r, c).imag());
    }
    j["real"].push_back(re);
    j["imag"].push_back(im);
  }
  return j.dump(2);
}

std::vector<Island> Network::detect_islands(const std::vector<bool>& forming,
                                            const std::vector<bool>& sources) const {
  const std::size_t n = buses_.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  for (const auto& l : lines_) {
    if (!l.closed) continue;
    const auto a = find(bus_index(l.from));
    const auto b = find(bus_index(l.to));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<Island> islands;
  std::vector<int> label(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = find(i);
    if (label[root] < 0) {
      label[root] = static_cast<int>(islands.size());
      islands.emplace_back();
    }
    auto& isl = islands[static_cast<std::size_t>(label[root])];
    isl.buses.push_back(i);
    if (i < forming.size() && forming[i]) isl.has_forming = true;
    if ((i < sources.size() && sources[i]) || (i < forming.size() && forming[i]))
      isl.energized = true;
  }
  return islands;
}

Phasor power_element_current(const PowerElement& e, Phasor v) {
  const double vm = std::abs(v);
  Phasor i;
  if (vm >= e.v_threshold && vm > 0.0) {
    i = std::conj(e.s / v);
  } else {
    i = std::conj(e.s) * v / (e.v_threshold * e.v_threshold);
  }
  if (e.i_max > 0.0) {
    const double im = std::abs(i);
    if (im > e.i_max) i *= e.i_max / im;
  }
  return i;
}

void Solver::refactor(const Network& net, const Structure& st) {
  const std::size_t n = net.bus_count();
  std::vector<bool> forming(n, false), sources(n, false);
  ideal_bus_.assign(n, false);
  for (const auto& nt : st.nortons) forming.at(nt.bus) = true;
  for (auto b : st.ideal_sources) {
    forming.at(b) = true;
    ideal_bus_.at(b) = true;
  }
  for (auto b : st.source_buses) sources.at(b) = true;

  energized_.assign(n, false);
  for (const auto& isl : net.detect_islands(forming, sources)) {
    if (!isl.energized) continue;
    if (!isl.has_forming) {
      std::vector<std::string> ids;
      for (auto b : isl.buses) ids.push_back(net.bus(b).id);
      throw IslandWithoutFormingSource(std::move(ids));
    }
    for (auto b : isl.buses) energized_[b] = true;
  }

  y_full_ = net.admittance();
  for (const auto& s : st.shunts) y_full_(static_cast<Eigen::Index>(s.bus), static_cast<Eigen::Index>(s.bus)) += s.y;
  for (const auto& nt : st.nortons)
    y_full_(static_cast<Eigen::Index>(nt.bus), static_cast<Eigen::Index>(nt.bus)) += 1.0 / nt.z;

  unknown_buses_.clear();
  known_buses_.clear();
  unknown_index_.assign(n, -1);
  for (std::size_t b = 0; b < n; ++b) {
    if (!energized_[b]) continue;
    if (ideal_bus_[b]) {
      known_buses_.push_back(b);
    } else {
      unknown_index_[b] = static_cast<int>(unknown_buses_.size());
      unknown_buses_.push_back(b);
    }
  }
  const auto nu = static_cast<Eigen::Index>(unknown_buses_.size());
  const auto nk = static_cast<Eigen::Index>(known_buses_.size());
  Eigen::MatrixXcd y_uu(nu, nu);
  y_uk_.resize(nu, nk);
  for (Eigen::Index r = 0; r < nu; ++r) {
    const auto br = static_cast<Eigen::Index>(unknown_buses_[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < nu; ++c)
      y_uu(r, c) = y_full_(br, static_cast<Eigen::Index>(unknown_buses_[static_cast<std::size_t>(c)]));
    for (Eigen::Index c = 0; c < nk; ++c)
      y_uk_(r, c) = y_full_(br, static_cast<Eigen::Index>(known_buses_[static_cast<std::size_t>(c)]));
  }
  y_uu_ = y_uu;
  if (nu > 0) {
    lu_.compute(y_uu);
    const double rc = lu_.rcond();
    if (!(rc > 1e-13)) throw SingularNetwork("singular network admittance (rcond " + std::to_string(rc) + ")");
  }
  structure_ = st;
  net_version_ = net.version();
  valid_ = true;
}

bool Solver::newton(std::vector<Phasor>& v, const std::vector<Phasor>& fixed,
                    const Eigen::VectorXcd& coupling, const StageInputs& in, int& iterations) const {
  const auto nu = static_cast<Eigen::Index>(unknown_buses_.size());
  // Power elements only depend on their own bus voltage.
  auto element_current = [&](std::size_t bus, Phasor vb) {
    Phasor i = 0.0;
    for (const auto& e : in.powers)
      if (e.bus == bus) i += power_element_current(e, vb);
    return i;
  };
  auto residual = [&](const std::vector<Phasor>& vv) {
    Eigen::VectorXcd vu(nu);
    for (Eigen::Index r = 0; r < nu; ++r) vu(r) = vv[unknown_buses_[static_cast<std::size_t>(r)]];
    Eigen::VectorXcd f = y_uu_ * vu + coupling;
    for (Eigen::Index r = 0; r < nu; ++r) {
      const auto b = unknown_buses_[static_cast<std::size_t>(r)];
      f(r) -= fixed[b] + element_current(b, vv[b]);
      for (const auto& s : structure_.shunts)
        if (s.virtual_ && s.bus == b) f(r) -= s.y * vv[b];
    }
    return f;
  };

  Eigen::MatrixXd jac(2 * nu, 2 * nu);
  Eigen::VectorXd rhs(2 * nu);
  for (int it = 0; it < newton_iterations; ++it) {
    const Eigen::VectorXcd f = residual(v);
    if (!f.allFinite()) return false;
    if (f.cwiseAbs().maxCoeff() < tolerance) {
      iterations = it;
      return true;
    }
    for (Eigen::Index r = 0; r < nu; ++r) {
      for (Eigen::Index c = 0; c < nu; ++c) {
        const Phasor y = y_uu_(r, c);
        jac(2 * r, 2 * c) = y.real();
        jac(2 * r, 2 * c + 1) = -y.imag();
        jac(2 * r + 1, 2 * c) = y.imag();
        jac(2 * r + 1, 2 * c + 1) = y.real();
      }
      const auto b = unknown_buses_[static_cast<std::size_t>(r)];
      const double h = 1e-7 * std::max(1.0, std::abs(v[b]));
      const Phasor i0 = element_current(b, v[b]);
      for (int k = 0; k < 2; ++k) {
        const Phasor step = k == 0 ? Phasor(h, 0.0) : Phasor(0.0, h);
        Phasor di = (element_current(b, v[b] + step) - i0) / h;
        for (const auto& s : structure_.shunts)
          if (s.virtual_ && s.bus == b) di += s.y * step / h;
        jac(2 * r, 2 * r + k) -= di.real();
        jac(2 * r + 1, 2 * r + k) -= di.imag();
      }
      rhs(2 * r) = -f(r).real();
      rhs(2 * r + 1) = -f(r).imag();
    }
    const Eigen::VectorXd dx = jac.partialPivLu().solve(rhs);
    if (!dx.allFinite()) return false;
    for (Eigen::Index r = 0; r < nu; ++r)
      v[unknown_buses_[static_cast<std::size_t>(r)]] += Phasor(dx(2 * r), dx(2 * r + 1));
  }
  return false;
}

Solution Solver::solve(const Network& net, const Structure& st, const StageInputs& in,
                       const std::vector<Phasor>* warm) {
  if (!valid_ || net_version_ != net.version() || !(structure_ == st)) {
    valid_ = false;
    refactor(net, st);
  }
  if (in.norton_emf.size() != st.nortons.size() || in.ideal_v.size() != st.ideal_sources.size())
    throw Error("stage inputs do not match network structure");

  const std::size_t n = net.bus_count();
  std::vector<Phasor> fixed(n, 0.0);
  for (const auto& [b, i] : in.currents) fixed.at(b) += i;
  for (std::size_t k = 0; k < st.nortons.size(); ++k)
    fixed[st.nortons[k].bus] += in.norton_emf[k] / st.nortons[k].z;

  std::vector<Phasor> v(n, 0.0);
  for (std::size_t b = 0; b < n; ++b) {
    if (!energized_[b]) continue;
    v[b] = (warm && warm->size() == n && std::abs((*warm)[b]) > 0.0) ? (*warm)[b] : Phasor(1.0, 0.0);
  }
  for (std::size_t k = 0; k < st.ideal_sources.size(); ++k) v[st.ideal_sources[k]] = in.ideal_v[k];

  const auto nu = static_cast<Eigen::Index>(unknown_buses_.size());
  const auto nk = static_cast<Eigen::Index>(known_buses_.size());
  Eigen::VectorXcd vk(nk);
  for (Eigen::Index c = 0; c < nk; ++c) vk(c) = v[known_buses_[static_cast<std::size_t>(c)]];
  const Eigen::VectorXcd coupling = nk > 0 ? Eigen::VectorXcd(y_uk_ * vk) : Eigen::VectorXcd::Zero(nu);

  auto variable_injection = [&](const std::vector<Phasor>& vv) {
    std::vector<Phasor> inj(n, 0.0);
    for (const auto& e : in.powers)
      if (energized_[e.bus]) inj[e.bus] += power_element_current(e, vv[e.bus]);
    for (const auto& s : st.shunts)
      if (s.virtual_) inj[s.bus] += s.y * vv[s.bus];
    return inj;
  };

  Solution sol;
  Eigen::VectorXcd rhs(nu);
  const std::vector<Phasor> start = v;
  bool converged = nu == 0;
  for (int it = 0; it < max_iterations && !converged; ++it) {
    const auto inj = variable_injection(v);
    for (Eigen::Index r = 0; r < nu; ++r) {
      const auto b = unknown_buses_[static_cast<std::size_t>(r)];
      rhs(r) = fixed[b] + inj[b] - coupling(r);
    }
    const Eigen::VectorXcd vu = lu_.solve(rhs);
    double delta = 0.0;
    bool finite = true;
    for (Eigen::Index r = 0; r < nu; ++r) {
      const auto b = unknown_buses_[static_cast<std::size_t>(r)];
      if (!std::isfinite(vu(r).real()) || !std::isfinite(vu(r).imag())) finite = false;
      delta = std::max(delta, std::abs(vu(r) - v[b]));
      v[b] = vu(r);
    }
    sol.iterations = it + 1;
    if (!finite) break;
    if (delta < tolerance) converged = true;
  }
  if (!converged) {
    v = start;
    int extra = 0;
    converged = newton(v, fixed, coupling, in, extra);
    sol.iterations += extra;
  }
  if (!converged) throw NonConvergence("network iteration did not converge");

  sol.fixed_current.reserve(in.currents.size());
  for (const auto& [b, i] : in.currents) sol.fixed_current.push_back(energized_.at(b) ? i : Phasor{});
  sol.power_current.reserve(in.powers.size());
  for (const auto& e : in.powers)
    sol.power_current.push_back(energized_[e.bus] ? power_element_current(e, v[e.bus]) : Phasor{});
  sol.norton_current.reserve(st.nortons.size());
  for (std::size_t k = 0; k < st.nortons.size(); ++k) {
    const auto& nt = st.nortons[k];
    sol.norton_current.push_back(energized_[nt.bus] ? (in.norton_emf[k] - v[nt.bus]) / nt.z : Phasor{});
  }

  // KCL: Y*V = injections at every energized bus
  const auto inj = variable_injection(v);
  Eigen::VectorXcd vf(static_cast<Eigen::Index>(n));
  for (std::size_t b = 0; b < n; ++b) vf(static_cast<Eigen::Index>(b)) = v[b];
  const Eigen::VectorXcd yv = y_full_ * vf;
  double resid = 0.0;
  std::vector<Phasor> ideal_inj(n, 0.0);
  for (std::size_t b = 0; b < n; ++b) {
    if (!energized_[b]) continue;
    const Phasor mismatch = yv(static_cast<Eigen::Index>(b)) - fixed[b] - inj[b];
    if (ideal_bus_[b]) {
      ideal_inj[b] = mismatch;
    } else {
      resid = std::max(resid, std::abs(mismatch));
    }
  }
  sol.ideal_current.reserve(st.ideal_sources.size());
  for (auto b : st.ideal_sources) sol.ideal_current.push_back(ideal_inj[b]);
  sol.kcl_residual = resid;
  sol.v = std::move(v);
  return sol;
}

}  // namespace gridform::network
