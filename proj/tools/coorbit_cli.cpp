// coorbit-cli: run one scenario config and emit JSON or CSV.
//
// Exit codes: 0 success, 2 validation error, 3 numerical error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "coorbit/connection.hpp"
#include "coorbit/fields.hpp"
#include "coorbit/groups.hpp"
#include "coorbit/hyperlin.hpp"
#include "coorbit/io.hpp"
#include "coorbit/momenta.hpp"
#include "coorbit/random.hpp"

using namespace coorbit;
using io::json;

namespace {

struct Options {
  std::string config;
  std::string out;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open config " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw validation_error(path + ": " + e.what());
  }
}

std::uint64_t seed_of(const json& cfg, const Options& opt) {
  if (opt.seed) return *opt.seed;
  return cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : 0;
}

double tol_of(const json& cfg, const Options& opt, double fallback) {
  if (opt.tol) return *opt.tol;
  return io::number_or(cfg, "tol", fallback, "config");
}

class Output {
 public:
  explicit Output(const Options& opt) : opt_(opt) {}

  std::ostream& data() {
    if (opt_.out.empty()) return std::cout;
    if (!file_.is_open()) {
      file_.open(opt_.out);
      if (!file_) throw validation_error("cannot write " + opt_.out);
    }
    return file_;
  }
  // Side summaries for CSV runs: stdout when data goes to a file, stderr otherwise.
  std::ostream& summary() { return opt_.out.empty() ? std::cerr : std::cout; }

  void emit(const json& j) { data() << j.dump(2) << '\n'; }

 private:
  const Options& opt_;
  std::ofstream file_;
};

json invariants_json(const Momentum& mu) {
  if (!is_timelike(mu, 1e-12)) return nullptr;
  const Invariants inv = invariants(mu);
  json j = {{"m0", inv.m0}, {"s", inv.s}};
  if (inv.q) j["q"] = *inv.q;
  return j;
}

// classify

void cmd_classify(const json& cfg, const Options& opt, Output& out) {
  io::check_keys(cfg, {"momentum", "tol", "seed", "isotropy"}, "config");
  const Momentum mu = io::momentum_from_json(io::require(cfg, "momentum", "config"), "momentum");
  const double tol = tol_of(cfg, opt, 1e-9);
  IsotropyOptions iso;
  if (cfg.contains("isotropy")) {
    const json& j = cfg.at("isotropy");
    io::check_keys(j, {"step", "rel_tol"}, "isotropy");
    iso.step = io::number_or(j, "step", iso.step, "isotropy");
    iso.rel_tol = io::number_or(j, "rel_tol", iso.rel_tol, "isotropy");
  }
  json report = io::class_to_json(classify(mu, tol));
  const int dim = mu.flavor.algebra_dim();
  const int iso_dim = isotropy_dimension(mu, iso);
  report["flavor"] = io::flavor_to_json(mu.flavor);
  report["algebra_dimension"] = dim;
  report["isotropy_dimension"] = iso_dim;
  report["orbit_dimension"] = dim - iso_dim;
  report["invariant_count"] = iso_dim;
  report["momentum"] = io::momentum_to_json(mu);
  report["tol"] = tol;
  if (mu.flavor.kind == FlavorKind::G0 && mu.q != 0.0) {
    const auto [c2, c4] = spin_casimirs(spin_momentum_charge(mu));
    report["charge_form_casimirs"] = {c2, c4};
  }
  if (mu.flavor.kind == FlavorKind::Poincare) {
    const auto [c2, c4] = poincare_casimirs(mu);
    report["casimirs"] = {c2, c4};
  }
  out.emit(report);
}

// act

void cmd_act(const json& cfg, const Options& opt, Output& out) {
  io::check_keys(cfg, {"element", "momentum", "samples", "seed", "tol"}, "config");
  const GroupElement a = io::element_from_json(io::require(cfg, "element", "config"), "element");
  const Momentum mu = io::momentum_from_json(io::require(cfg, "momentum", "config"), "momentum");
  require_same(a.flavor(), mu.flavor);
  const Momentum after = coadjoint_closed(a, mu);
  const double oracle_diff = momentum_diff(after, coadjoint_oracle(a, mu));

  if (opt.format == "csv") {
    const VectorXd before_c = to_components(mu), after_c = to_components(after);
    const auto names = io::component_names(mu.flavor);
    out.data() << "component,before,after\n";
    for (size_t k = 0; k < names.size(); ++k)
      out.data() << names[k] << ',' << io::fmt(before_c(k)) << ',' << io::fmt(after_c(k)) << '\n';
    out.summary() << "oracle_difference " << io::fmt(oracle_diff) << '\n';
    return;
  }
  json report = {{"flavor", io::flavor_to_json(mu.flavor)},
                 {"before", io::momentum_to_json(mu)},
                 {"after", io::momentum_to_json(after)},
                 {"q_before", mu.q},
                 {"q_after", after.q},
                 {"oracle_difference", oracle_diff},
                 {"invariants_before", invariants_json(mu)},
                 {"invariants_after", invariants_json(after)}};
  const int samples = cfg.value("samples", 0);
  if (samples < 0) throw validation_error("config.samples: must be non-negative");
  if (samples > 0) {
    Sampler rng(seed_of(cfg, opt));
    const double tol = tol_of(cfg, opt, 1e-9);
    const Invariants ref = invariants(mu);
    double dm = 0, ds = 0, dq = 0;
    for (int n = 0; n < samples; ++n) {
      const Momentum b = coadjoint_closed(random_element(mu.flavor, rng), mu);
      const Invariants inv = invariants(b);
      dm = std::max(dm, std::abs(inv.m0 - ref.m0) / ref.m0);
      ds = std::max(ds, std::abs(inv.s - ref.s) / std::max(ref.s, 1e-300));
      dq = std::max(dq, std::abs(b.q - mu.q));
    }
    report["drift"] = {{"samples", samples}, {"seed", seed_of(cfg, opt)}, {"m0_rel", dm},
                       {"s_rel", ref.s > 0 ? json(ds) : json(nullptr)}, {"q_abs", dq},
                       {"within_tol", dm < tol && (ref.s == 0 || ds < tol)}, {"tol", tol}};
  }
  out.emit(report);
}

// sweep

void cmd_sweep(const json& cfg, const Options& opt, Output& out) {
  io::check_keys(cfg, {"element", "momentum", "omegas", "seed"}, "config");
  const json& ej = io::require(cfg, "element", "config");
  io::check_keys(ej, {"translation", "xi", "velocity", "rotation", "b"}, "element");
  const ElementParams prm = io::element_params_from_json(ej, "element");
  json mj = io::require(cfg, "momentum", "config");
  if (mj.contains("flavor")) throw validation_error("momentum: the sweep sets the flavor itself");
  mj["flavor"] = "G1";
  const Momentum tmpl = io::momentum_from_json(mj, "momentum");
  const VectorXd omegas = io::vector(io::require(cfg, "omegas", "config"), "omegas");
  const std::vector<double> ws(omegas.data(), omegas.data() + omegas.size());
  const auto rows = omega_sweep(prm, tmpl, ws);
  if (opt.format == "csv")
    io::write_sweep_csv(out.data(), rows);
  else
    out.emit({{"rows", io::sweep_to_json(rows)}});
}

// integrate

ParticleState state_from_json(const json& j, const SpacetimeFields& f) {
  io::check_keys(j, {"X", "v", "q", "m0"}, "state");
  const Vec4 x = j.contains("X") ? Vec4(io::vector(j.at("X"), "state.X", 4)) : Vec4::Zero();
  const Eigen::Vector3d v = j.contains("v") ? Eigen::Vector3d(io::vector(j.at("v"), "state.v", 3)) : Eigen::Vector3d::Zero();
  return make_state(f, x, v, io::number_or(j, "q", 0.0, "state"), io::number_or(j, "m0", 1.0, "state"));
}

json cyclotron_summary(const Trajectory& tr, const SpacetimeFields& f) {
  const ParticleState& s0 = tr.states.front();
  const auto em = electric_magnetic(f, s0.X);
  if (em.E.norm() > 0 || em.B.head<2>().norm() > 0 || em.B(2) == 0 || s0.q == 0) return nullptr;
  std::vector<Eigen::Vector2d> pts;
  for (const auto& s : tr.states) pts.emplace_back(s.X(1), s.X(2));
  const auto [centre, radius] = fit_circle(pts);
  const double expected = s0.m0 * s0.U.segment<2>(1).norm() / std::abs(s0.q * em.B(2));
  // sense of rotation seen from +z
  const Eigen::Vector2d r0 = pts.front() - centre;
  const Eigen::Vector2d v0 = s0.U.segment<2>(1);
  const double turn = r0(0) * v0(1) - r0(1) * v0(0);
  return {{"radius", radius},
          {"expected_radius", expected},
          {"radius_rel_error", std::abs(radius - expected) / expected},
          {"centre", {centre(0), centre(1)}},
          {"sense", turn > 0 ? "counterclockwise" : "clockwise"}};
}

void cmd_integrate(const json& cfg, const Options& opt, Output& out) {
  io::check_keys(cfg, {"fields", "state", "ds", "steps", "record_every", "method", "seed"}, "config");
  const SpacetimeFields f = io::fields_from_json(io::require(cfg, "fields", "config"));
  const ParticleState st = state_from_json(io::require(cfg, "state", "config"), f);
  const double ds = io::number_or(cfg, "ds", 1e-3, "config");
  const int steps = cfg.value("steps", 1000);
  const int every = cfg.value("record_every", 1);
  const std::string method = cfg.value("method", std::string("motion"));
  if (method != "motion" && method != "transport" && method != "both")
    throw validation_error("config.method: expected motion, transport or both");

  json summary = {{"fields", f.name}, {"ds", ds}, {"steps", steps}, {"method", method}};
  std::optional<Trajectory> tr;
  std::optional<std::vector<TransportSample>> pt;
  if (method != "transport") {
    tr = integrate_motion(st, f, ds, steps, every);
    summary["max_norm_drift"] = tr->max_norm_drift;
    summary["q_constant"] = std::all_of(tr->states.begin(), tr->states.end(), [&](auto& s) { return s.q == st.q; });
    summary["m0_constant"] = std::all_of(tr->states.begin(), tr->states.end(), [&](auto& s) { return s.m0 == st.m0; });
    summary["final_X"] = io::to_json(VectorXd(tr->states.back().X));
    summary["cyclotron"] = cyclotron_summary(*tr, f);
  }
  if (method != "motion") {
    pt = transport_5momentum(st, f, ds, steps, every);
    summary["transport_final_X"] = io::to_json(VectorXd(pt->back().X));
  }
  if (tr && pt) {
    double dev = 0;
    for (size_t i = 0; i < pt->size(); ++i) dev = std::max(dev, ((*pt)[i].U - tr->states[i].U).cwiseAbs().maxCoeff());
    summary["transport_max_velocity_deviation"] = dev;
  }

  if (opt.format == "csv") {
    if (tr)
      io::write_trajectory_csv(out.data(), *tr, f);
    else
      io::write_transport_csv(out.data(), *pt, f, st.m0);
    out.summary() << summary.dump(2) << '\n';
    return;
  }
  json rows = json::array();
  if (tr)
    for (const auto& s : tr->states)
      rows.push_back({{"s", s.s}, {"X", io::to_json(VectorXd(s.X))}, {"U", io::to_json(VectorXd(s.U))}});
  else
    for (const auto& s : *pt)
      rows.push_back({{"s", s.s}, {"X", io::to_json(VectorXd(s.X))}, {"U", io::to_json(VectorXd(s.U))},
                      {"Pi", io::to_json(VectorXd(s.Pi))}, {"q", s.q}});
  out.emit({{"summary", summary}, {"trajectory", rows}});
}

// residuals

std::vector<Vec4> points_from_json(const json& cfg) {
  std::vector<Vec4> pts;
  if (cfg.contains("points")) {
    const MatrixXd m = io::matrix(cfg.at("points"), "points", -1, 4);
    for (int i = 0; i < m.rows(); ++i) pts.emplace_back(m.row(i).transpose());
  }
  if (cfg.contains("grid")) {
    const json& g = cfg.at("grid");
    io::check_keys(g, {"min", "max", "n"}, "grid");
    const Vec4 lo = io::vector(io::require(g, "min", "grid"), "grid.min", 4);
    const Vec4 hi = io::vector(io::require(g, "max", "grid"), "grid.max", 4);
    const VectorXd n = io::vector(io::require(g, "n", "grid"), "grid.n", 4);
    std::array<int, 4> cnt;
    for (int k = 0; k < 4; ++k) {
      cnt[k] = static_cast<int>(n(k));
      if (cnt[k] < 1 || cnt[k] != n(k)) throw validation_error("grid.n: positive integers expected");
    }
    for (int a = 0; a < cnt[0]; ++a)
      for (int b = 0; b < cnt[1]; ++b)
        for (int c = 0; c < cnt[2]; ++c)
          for (int d = 0; d < cnt[3]; ++d) {
            const std::array<int, 4> idx = {a, b, c, d};
            Vec4 x;
            for (int k = 0; k < 4; ++k) x(k) = cnt[k] == 1 ? lo(k) : lo(k) + (hi(k) - lo(k)) * idx[k] / (cnt[k] - 1);
            pts.push_back(x);
          }
  }
  if (pts.empty()) throw validation_error("config: give points or grid");
  return pts;
}

void cmd_residuals(const json& cfg, const Options& opt, Output& out) {
  io::check_keys(cfg, {"fields", "matter", "constants", "points", "grid", "tol", "seed"}, "config");
  const SpacetimeFields f = io::fields_from_json(io::require(cfg, "fields", "config"));
  const MatterField mf = cfg.contains("matter") ? io::matter_from_json(cfg.at("matter")) : vacuum_field();
  const CouplingConstants k = cfg.contains("constants") ? io::constants_from_json(cfg.at("constants"))
                                                        : CouplingConstants::maxwell_limit();
  const double tol = tol_of(cfg, opt, 1e-10);
  const auto pts = points_from_json(cfg);
  std::vector<ResidualNorms> rows;
  for (const auto& x : pts) rows.push_back(residual_norms(f, mf, k, x));
  double worst = 0;
  for (const auto& r : rows) worst = std::max(worst, r.max());

  if (opt.format == "csv") {
    auto& os = out.data();
    os << "X0,X1,X2,X3,einstein,maxwell,conservation,metric_compat,torsion\n";
    for (size_t i = 0; i < pts.size(); ++i) {
      for (int c = 0; c < 4; ++c) os << io::fmt(pts[i](c)) << ',';
      const auto& r = rows[i];
      os << io::fmt(r.einstein) << ',' << io::fmt(r.maxwell) << ',' << io::fmt(r.conservation) << ','
         << io::fmt(r.metric_compat) << ',' << io::fmt(r.torsion) << '\n';
    }
    out.summary() << "max_residual " << io::fmt(worst) << (worst < tol ? " within" : " above") << " tol "
                  << io::fmt(tol) << '\n';
    return;
  }
  json arr = json::array();
  for (size_t i = 0; i < pts.size(); ++i) {
    const auto& r = rows[i];
    arr.push_back({{"X", io::to_json(VectorXd(pts[i]))},
                   {"einstein", r.einstein},
                   {"maxwell", r.maxwell},
                   {"conservation", r.conservation},
                   {"metric_compat", r.metric_compat},
                   {"torsion", r.torsion}});
  }
  out.emit({{"rows", arr}, {"max_residual", worst}, {"tol", tol}, {"within_tol", worst < tol}});
}

// vecprod

template <int N>
json vecprod_n(const json& cfg) {
  const Metric<N> g = io::metric_from_json<N>(cfg.at("metric"));
  const MatrixXd vs = io::matrix(io::require(cfg, "vectors", "config"), "vectors", N - 1, N);
  std::vector<Vec<N>> v;
  for (int i = 0; i < N - 1; ++i) v.emplace_back(vs.row(i).transpose());
  const Vec<N> j = vector_product(v, g);
  json report = {{"dim", N}, {"product", io::to_json(VectorXd(j))}};
  if constexpr (N >= 4) {
    const Mat<N> gram = g.gram();
    const bool block = gram.col(N - 1).head(N - 1).isZero(0) && gram.row(N - 1).head(N - 1).isZero(0);
    if (block) {
      const Metric<N - 1> upper(Mat<N - 1>(gram.template topLeftCorner<N - 1, N - 1>()), g.orientation());
      const Vec<N> r = vector_product_recursive<N - 1>(v, upper, gram(N - 1, N - 1));
      report["recursive"] = io::to_json(VectorXd(r));
      report["difference"] = (r - j).cwiseAbs().maxCoeff();
    }
  }
  return report;
}

void cmd_vecprod(const json& cfg, const Options&, Output& out) {
  io::check_keys(cfg, {"metric", "vectors", "seed"}, "config");
  const json& m = io::require(cfg, "metric", "config");
  const int dim = m.contains("dim") ? m.at("dim").get<int>() : static_cast<int>(io::require(m, "gram", "metric").size());
  switch (dim) {
    case 3: out.emit(vecprod_n<3>(cfg)); break;
    case 4: out.emit(vecprod_n<4>(cfg)); break;
    case 5: out.emit(vecprod_n<5>(cfg)); break;
    default: throw validation_error("metric.dim: expected 3, 4 or 5");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coorbit-cli: coadjoint orbits, charged motion and field residuals"};
  app.require_subcommand(1);
  Options opt;
  using Cmd = void (*)(const json&, const Options&, Output&);
  const std::vector<std::tuple<std::string, std::string, Cmd>> commands = {
      {"classify", "classify a momentum and count its invariants", cmd_classify},
      {"act", "apply a coadjoint action", cmd_act},
      {"sweep", "omega sweep down to the G0 contraction", cmd_sweep},
      {"integrate", "integrate charged-particle motion", cmd_integrate},
      {"residuals", "field-equation residuals at points", cmd_residuals},
      {"vecprod", "vector product (debug)", cmd_vecprod}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config, "scenario JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output path (default stdout)");
    sub->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", opt.seed, "random seed (overrides config)");
    sub->add_option("--tol", opt.tol, "tolerance (overrides config)");
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    const json cfg = load_config(opt.config);
    Output out(opt);
    for (size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) std::get<2>(commands[i])(cfg, opt, out);
    return 0;
  } catch (const validation_error& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  }
}
