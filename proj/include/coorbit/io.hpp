#pragma once

// JSON and CSV forms of the library types, plus the config vocabulary
// shared by the command-line tool.

#include <json.hpp>

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "coorbit/connection.hpp"
#include "coorbit/errors.hpp"
#include "coorbit/fields.hpp"
#include "coorbit/groups.hpp"
#include "coorbit/momenta.hpp"

namespace coorbit::io {

using json = nlohmann::json;

// Keys of `obj` outside `allowed` are rejected with their path.
inline void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& path) {
  if (!obj.is_object()) throw validation_error(path + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!ok.count(key)) throw validation_error(path + ": unknown key '" + key + "'");
}

inline const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.contains(key)) throw validation_error(path + ": missing key '" + key + "'");
  return obj.at(key);
}

inline double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw validation_error(path + ": expected a number");
  return v.get<double>();
}

inline double number_or(const json& obj, const char* key, double fallback, const std::string& path) {
  return obj.contains(key) ? number(obj.at(key), path + "." + key) : fallback;
}

inline VectorXd vector(const json& v, const std::string& path, int size = -1) {
  if (!v.is_array()) throw validation_error(path + ": expected an array");
  if (size >= 0 && static_cast<int>(v.size()) != size)
    throw validation_error(path + ": expected " + std::to_string(size) + " entries");
  VectorXd out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out(i) = number(v[i], path + "[" + std::to_string(i) + "]");
  return out;
}

inline MatrixXd matrix(const json& v, const std::string& path, int rows = -1, int cols = -1) {
  if (!v.is_array() || v.empty()) throw validation_error(path + ": expected a nested array");
  if (rows >= 0 && static_cast<int>(v.size()) != rows)
    throw validation_error(path + ": expected " + std::to_string(rows) + " rows");
  const int c = cols >= 0 ? cols : static_cast<int>(v[0].size());
  MatrixXd out(v.size(), c);
  for (size_t i = 0; i < v.size(); ++i) out.row(i) = vector(v[i], path + "[" + std::to_string(i) + "]", c);
  return out;
}

inline json to_json(const VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline json to_json(const MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) rows.push_back(to_json(VectorXd(m.row(i).transpose())));
  return rows;
}

// Metric

template <int N>
json metric_to_json(const Metric<N>& g) {
  return {{"dim", N}, {"gram", to_json(MatrixXd(g.gram()))}, {"orientation", g.orientation()}};
}

template <int N>
Metric<N> metric_from_json(const json& j, const std::string& path = "metric") {
  check_keys(j, {"dim", "gram", "orientation"}, path);
  if (j.contains("dim") && j.at("dim") != N) throw validation_error(path + ".dim: expected " + std::to_string(N));
  const MatrixXd gram = matrix(require(j, "gram", path), path + ".gram", N, N);
  const int o = j.contains("orientation") ? j.at("orientation").get<int>() : 1;
  return Metric<N>(Mat<N>(gram), o);
}

// Flavor

inline json flavor_to_json(const Flavor& f) {
  json j = {{"flavor", f.name()}};
  if (f.kind == FlavorKind::GOmega) j["omega"] = f.omega;
  return j;
}

inline Flavor flavor_from_json(const json& j, const std::string& path) {
  const json& name = require(j, "flavor", path);
  if (!name.is_string()) throw validation_error(path + ".flavor: expected a string");
  const std::string s = name.get<std::string>();
  if (s == "Poincare") return Flavor::poincare();
  if (s == "G1") return Flavor::g1();
  if (s == "G0") return Flavor::g0();
  if (s == "GOmega") return Flavor::gomega(number(require(j, "omega", path), path + ".omega"));
  throw validation_error(path + ".flavor: unknown flavor '" + s + "'");
}

inline void check_omega_key(const json& j, const Flavor& f, const std::string& path) {
  if (j.contains("omega") && f.kind != FlavorKind::GOmega) throw validation_error(path + ": omega only applies to GOmega");
}

// Group elements: either explicit matrices {C, P} or parameters
// {translation, xi, velocity, rotation, b}.

inline json element_to_json(const GroupElement& a) {
  json j = flavor_to_json(a.flavor());
  j["C"] = to_json(a.C());
  j["P"] = to_json(a.P());
  return j;
}

inline ElementParams element_params_from_json(const json& j, const std::string& path) {
  ElementParams prm;
  if (j.contains("translation")) prm.C = vector(j.at("translation"), path + ".translation", 4);
  prm.xi = number_or(j, "xi", 0.0, path);
  Vec3 v = Vec3::Zero();
  Mat3 r = Mat3::Identity();
  if (j.contains("velocity")) v = vector(j.at("velocity"), path + ".velocity", 3);
  if (j.contains("rotation")) r = matrix(j.at("rotation"), path + ".rotation", 3, 3);
  prm.PL = lorentz_from_boost_rotation(v, r);
  if (j.contains("b")) prm.b = vector(j.at("b"), path + ".b", 4);
  return prm;
}

inline GroupElement element_from_json(const json& j, const std::string& path = "element") {
  const Flavor f = flavor_from_json(j, path);
  check_omega_key(j, f, path);
  if (j.contains("C") || j.contains("P")) {
    check_keys(j, {"flavor", "omega", "C", "P"}, path);
    const int d = f.space_dim();
    return GroupElement::from_matrices(f, vector(require(j, "C", path), path + ".C", d),
                                       matrix(require(j, "P", path), path + ".P", d, d));
  }
  check_keys(j, {"flavor", "omega", "translation", "xi", "velocity", "rotation", "b"}, path);
  if (!f.five_dim() && (j.contains("xi") || j.contains("b")))
    throw validation_error(path + ": xi and b need a five-dimensional flavor");
  return make_element(f, element_params_from_json(j, path));
}

// Momenta: explicit {Pi, M, q, Q} or a forward construction {build: {...}}.

inline json momentum_to_json(const Momentum& mu) {
  json j = flavor_to_json(mu.flavor);
  j["Pi"] = to_json(VectorXd(mu.Pi));
  j["M"] = to_json(MatrixXd(mu.M));
  if (mu.flavor.five_dim()) {
    j["q"] = mu.q;
    j["Q"] = to_json(VectorXd(mu.Q));
  }
  return j;
}

inline Momentum momentum_from_build(const Flavor& f, const json& b, const std::string& path) {
  const double m0 = number(require(b, "m0", path), path + ".m0");
  const double s = number_or(b, "s", 0.0, path);
  if (f.pseudo_orthogonal()) {
    check_keys(b, {"m0", "s", "X", "I", "J1", "J2"}, path);
    const Vec5 x = b.contains("X") ? Vec5(vector(b.at("X"), path + ".X", 5)) : Vec5::Zero();
    return make_momentum_5d(f, m0, s, x, vector(require(b, "I", path), path + ".I", 5),
                            vector(require(b, "J1", path), path + ".J1", 5),
                            vector(require(b, "J2", path), path + ".J2", 5));
  }
  check_keys(b, {"m0", "s", "X", "I", "J", "q"}, path);
  const Vec4 x = b.contains("X") ? Vec4(vector(b.at("X"), path + ".X", 4)) : Vec4::Zero();
  const Vec4 i = b.contains("I") ? Vec4(vector(b.at("I"), path + ".I", 4)) : Vec4::Unit(0);
  const Vec4 jv = b.contains("J") ? Vec4(vector(b.at("J"), path + ".J", 4)) : Vec4::Unit(1);
  return make_momentum_4d(f, m0, s, x, i, jv, number_or(b, "q", 0.0, path));
}

inline Momentum momentum_from_json(const json& j, const std::string& path = "momentum") {
  const Flavor f = flavor_from_json(j, path);
  check_omega_key(j, f, path);
  if (j.contains("build")) {
    check_keys(j, {"flavor", "omega", "build"}, path);
    return momentum_from_build(f, j.at("build"), path + ".build");
  }
  check_keys(j, {"flavor", "omega", "Pi", "M", "q", "Q"}, path);
  Momentum mu{f};
  mu.Pi = vector(require(j, "Pi", path), path + ".Pi", 4);
  if (j.contains("M")) mu.M = matrix(j.at("M"), path + ".M", 4, 4);
  if (f.five_dim()) {
    mu.q = number_or(j, "q", 0.0, path);
    if (j.contains("Q")) mu.Q = vector(j.at("Q"), path + ".Q", 4);
  } else if (j.contains("q") || j.contains("Q")) {
    throw validation_error(path + ": Poincare momenta carry no q or Q");
  }
  const double scale = std::max(1.0, mu.M.cwiseAbs().maxCoeff());
  if (skew_defect(mu) > 1e-9 * scale) throw validation_error(path + ".M: not skew-adjoint for the Minkowski metric");
  return mu;
}

inline json class_to_json(const ParticleClass& c) {
  json j = {{"class", tag_name(c.tag)}};
  if (c.invariants) {
    json inv = {{"m0", c.invariants->m0}, {"s", c.invariants->s}};
    if (c.invariants->q) inv["q"] = *c.invariants->q;
    j["invariants"] = inv;
  }
  return j;
}

inline ParticleClass class_from_json(const json& j, const std::string& path = "class") {
  check_keys(j, {"class", "invariants"}, path);
  ParticleClass c;
  c.tag = tag_from_name(require(j, "class", path).get<std::string>());
  if (j.contains("invariants")) {
    const json& inv = j.at("invariants");
    check_keys(inv, {"m0", "s", "q"}, path + ".invariants");
    Invariants v;
    v.m0 = number(require(inv, "m0", path), path + ".invariants.m0");
    v.s = number(require(inv, "s", path), path + ".invariants.s");
    if (inv.contains("q")) v.q = number(inv.at("q"), path + ".invariants.q");
    c.invariants = v;
  }
  return c;
}

// Field presets: {preset, <parameters>, derivatives: analytic | fd, fd_step, richardson, potential: {...}}.

inline SpacetimeFields fields_from_json(const json& j, const std::string& path = "fields") {
  const json& name_j = require(j, "preset", path);
  if (!name_j.is_string()) throw validation_error(path + ".preset: expected a string");
  const std::string name = name_j.get<std::string>();
  const std::initializer_list<const char*> common = {"preset", "derivatives", "fd_step", "richardson", "potential"};
  auto keys = [&](std::initializer_list<const char*> extra) {
    std::set<std::string> ok;
    for (auto k : common) ok.insert(k);
    for (auto k : extra) ok.insert(k);
    for (const auto& [key, _] : j.items())
      if (!ok.count(key)) throw validation_error(path + ": unknown key '" + key + "' for preset " + name);
  };
  SpacetimeFields f;
  if (name == "flat") {
    keys({});
    f = presets::flat();
  } else if (name == "uniform_b") {
    keys({"B0"});
    f = presets::uniform_b(number(require(j, "B0", path), path + ".B0"));
  } else if (name == "coulomb") {
    keys({"k"});
    f = presets::coulomb(number(require(j, "k", path), path + ".k"));
  } else if (name == "charged_ball") {
    keys({"rho_e", "radius", "epsilon0"});
    f = presets::charged_ball(number(require(j, "rho_e", path), path + ".rho_e"),
                              number(require(j, "radius", path), path + ".radius"), number_or(j, "epsilon0", 1.0, path));
  } else if (name == "conformal") {
    keys({"c"});
    f = presets::conformal(vector(require(j, "c", path), path + ".c", 4));
  } else if (name == "weak_field") {
    keys({"mass", "softening"});
    f = presets::weak_field(number(require(j, "mass", path), path + ".mass"), number_or(j, "softening", 1.0, path));
  } else if (name == "sphere") {
    keys({"radius"});
    f = presets::sphere(number(require(j, "radius", path), path + ".radius"));
  } else {
    throw validation_error(path + ".preset: unknown preset '" + name + "'");
  }
  if (j.contains("potential")) f = presets::with_potential(f, fields_from_json(j.at("potential"), path + ".potential"));
  const std::string mode = j.value("derivatives", std::string("analytic"));
  const double step = number_or(j, "fd_step", 1e-4, path);
  if (!(step > 0)) throw validation_error(path + ".fd_step: must be positive");
  if (mode == "fd")
    f = finite_difference_mode(f, step);
  else if (mode != "analytic")
    throw validation_error(path + ".derivatives: expected analytic or fd");
  f.fd_step = step;
  f.richardson = j.value("richardson", false);
  return f;
}

inline CouplingConstants constants_from_json(const json& j, const std::string& path = "constants") {
  check_keys(j, {"G_N", "epsilon0", "Lambda"}, path);
  return CouplingConstants::maxwell_limit(number_or(j, "G_N", 1.0, path), number_or(j, "epsilon0", 1.0, path),
                                          number_or(j, "Lambda", 0.0, path));
}

// Matter presets: vacuum, dust_at_rest {rho, rho_e}, perfect_fluid {rho, p}, cyclotron_dust {rho, q, m0, B0}.
inline MatterField matter_from_json(const json& j, const std::string& path = "matter") {
  const std::string name = require(j, "preset", path).get<std::string>();
  MatterField mf;
  if (name == "vacuum") {
    check_keys(j, {"preset"}, path);
    return mf;
  }
  if (name == "dust_at_rest" || name == "perfect_fluid") {
    check_keys(j, {"preset", "rho", "p", "rho_e"}, path);
    const double rho = number_or(j, "rho", 0.0, path), p = number_or(j, "p", 0.0, path);
    const double rho_e = number_or(j, "rho_e", 0.0, path);
    if (name == "dust_at_rest" && p != 0.0) throw validation_error(path + ": dust has no pressure");
    mf.rho = [rho](const Vec4&) { return rho; };
    mf.p = [p](const Vec4&) { return p; };
    mf.rho_e = [rho_e](const Vec4&) { return rho_e; };
    return mf;
  }
  if (name == "cyclotron_dust") {
    check_keys(j, {"preset", "rho", "q", "m0", "B0"}, path);
    const double rho = number(require(j, "rho", path), path + ".rho");
    const double q = number_or(j, "q", 1.0, path), m0 = number_or(j, "m0", 1.0, path);
    const double w = q * number_or(j, "B0", 1.0, path) / m0;
    mf.rho = [rho](const Vec4&) { return rho; };
    mf.rho_e = [rho, q, m0](const Vec4&) { return rho * q / m0; };
    mf.U = [w](const Vec4& x) {
      const double vx = -w * x(2), vy = w * x(1);
      return Vec4(std::sqrt(1 + vx * vx + vy * vy), vx, vy, 0);
    };
    return mf;
  }
  throw validation_error(path + ".preset: unknown matter preset '" + name + "'");
}

// CSV

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr, const SpacetimeFields& f) {
  os << "s,X0,X1,X2,X3,U0,U1,U2,U3,q,m0,unit_norm_drift\n";
  for (const auto& st : tr.states) {
    os << fmt(st.s);
    for (int i = 0; i < 4; ++i) os << ',' << fmt(st.X(i));
    for (int i = 0; i < 4; ++i) os << ',' << fmt(st.U(i));
    os << ',' << fmt(st.q) << ',' << fmt(st.m0) << ',' << fmt(norm_defect(f, st)) << '\n';
  }
}

inline void write_transport_csv(std::ostream& os, const std::vector<TransportSample>& tr, const SpacetimeFields& f,
                                double m0) {
  os << "s,X0,X1,X2,X3,U0,U1,U2,U3,q,m0,unit_norm_drift,Pi0,Pi1,Pi2,Pi3\n";
  for (const auto& t : tr) {
    os << fmt(t.s);
    for (int i = 0; i < 4; ++i) os << ',' << fmt(t.X(i));
    for (int i = 0; i < 4; ++i) os << ',' << fmt(t.U(i));
    const double drift = std::abs(t.U.dot(f.G(t.X) * t.U) - 1.0);
    os << ',' << fmt(t.q) << ',' << fmt(m0) << ',' << fmt(drift);
    for (int i = 0; i < 4; ++i) os << ',' << fmt(t.Pi(i));
    os << '\n';
  }
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "omega,q_in,q_out,dq,m0_in,m0_out,m0_drift,isotropy\n";
  for (const auto& r : rows)
    os << fmt(r.omega) << ',' << fmt(r.q_in) << ',' << fmt(r.q_out) << ',' << fmt(r.dq) << ',' << fmt(r.m0_in) << ','
       << fmt(r.m0_out) << ',' << fmt(r.m0_drift) << ',' << r.isotropy << '\n';
}

inline json sweep_to_json(const std::vector<SweepRow>& rows) {
  json out = json::array();
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  for (const auto& r : rows)
    out.push_back({{"omega", r.omega}, {"q_in", r.q_in}, {"q_out", r.q_out}, {"dq", r.dq}, {"m0_in", num(r.m0_in)},
                   {"m0_out", num(r.m0_out)}, {"m0_drift", num(r.m0_drift)}, {"isotropy", r.isotropy}});
  return out;
}

// Component labels matching to_components.
inline std::vector<std::string> component_names(const Flavor& f) {
  std::vector<std::string> n = {"Pi0", "Pi1", "Pi2", "Pi3"};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) n.push_back("GM" + std::to_string(i) + std::to_string(j));
  if (f.five_dim()) {
    n.push_back("q");
    for (int i = 0; i < 4; ++i) n.push_back("Q" + std::to_string(i));
  }
  return n;
}

}  // namespace coorbit::io
