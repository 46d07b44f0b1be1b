#include "qedcs_app/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "qedcs/bounds.hpp"
#include "qedcs/errors.hpp"
#include "qedcs/flow.hpp"
#include "qedcs/identities.hpp"
#include "qedcs/kernels.hpp"
#include "qedcs/operators.hpp"
#include "qedcs/oracle.hpp"

namespace qedcs::app {

using nlohmann::json;

namespace {

// Acceptance thresholds.
constexpr double kOracleRelTol = 1e-6;
constexpr double kOracleSelfConvergence = 1e-9;
constexpr double kOracleProjectorDefect = 1e-12;
constexpr double kOperatorGaugeTol = 1e-15;
constexpr double kBoundExactSlack = 1e-10;
constexpr double kConvergentChange = 0.10;
constexpr double kGrowthLower = 1.6;
constexpr double kGrowthUpper = 2.6;
constexpr double kRepresentativeDefect = 1e-10;
constexpr double kRepresentativeChange = 0.10;
constexpr double kSlopeWithS = -1.3;
constexpr double kSlopeWithoutS = -2.5;
constexpr double kSlopeGap = 1.2;
constexpr double kEpsExponentLower = 0.4;
constexpr double kEpsExponentUpper = 0.6;
constexpr double kRemainderDrift = 0.15;
constexpr double kStaticConstancy = 1e-10;

class Stopwatch {
public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

private:
  std::chrono::steady_clock::time_point t0_;
};

// Sets the elapsed time on rows added since `first`.
void stamp(ResultTable& t, std::size_t first, const Stopwatch& sw) {
  const double s = sw.seconds();
  for (std::size_t k = first; k < t.rows.size(); ++k) t.rows[k].elapsed_s = s;
}

std::string kv(const std::string& key, double v) { return key + "=" + format_double(v); }
std::string kv(const std::string& key, int v) { return key + "=" + std::to_string(v); }
std::string join(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ";";
    out += p;
  }
  return out;
}

ResultTable start(const std::string& command, const ExperimentConfig& c) {
  ResultTable t;
  t.command = command;
  t.config_hash = c.hash();
  t.report["command"] = command;
  t.report["config_hash"] = t.config_hash;
  t.report["seed"] = c.seed;
  t.report["profile"] = c.quick ? "quick" : "default";
  return t;
}

double relative_change(double from, double to) {
  const double d = std::abs(to - from);
  return d == 0.0 ? 0.0 : d / std::abs(from);
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] < v[k - 1])) return false;
  return true;
}

std::string resolve(const ExperimentConfig& c, const std::string& p) {
  const std::filesystem::path path(p);
  if (path.is_absolute() || c.source_dir.empty()) return p;
  return (std::filesystem::path(c.source_dir) / path).string();
}

GridPtr grid_from(const json& j, const std::string& path, SurfacePtr surface, bool periodic,
                  const std::vector<SupportBall>& supports) {
  const double L = get_number(j, "L", path);
  const int N = get_int(j, "N", path);
  if (N < 2) throw ConfigError("config " + path + ".N: must be at least 2");
  const double bound = check_gradient_bound(*surface, L);
  if (!(bound < 1.0)) throw ConfigError("config " + path + ": surface is not space-like on [-L, L]^3");
  return make_grid(surface, L, N, parse_rule(j, "rule", path), periodic, supports, 0.0);
}

void require_space_like(const CauchySurface& s, double L, const std::string& path) {
  if (!(check_gradient_bound(s, L) < 1.0))
    throw ConfigError("config " + path + ": surface is not space-like on [-L, L]^3");
}

std::vector<int> refinement_list(const json& j, const std::string& path, std::size_t min_len) {
  std::vector<int> Ns = get_ints(j, "N", path);
  if (Ns.size() < min_len)
    throw ConfigError("config " + path + ".N: refinement list needs at least " + std::to_string(min_len) + " entries");
  for (std::size_t k = 0; k < Ns.size(); ++k) {
    if (Ns[k] < 2) throw ConfigError("config " + path + ".N: entries must be at least 2");
    if (k > 0 && Ns[k] <= Ns[k - 1]) throw ConfigError("config " + path + ".N: entries must increase");
  }
  return Ns;
}

}  // namespace

std::vector<CFourVector> read_wset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("w-set: cannot open '" + path + "'");
  std::string line;
  std::getline(in, line);
  if (line.rfind("id,", 0) != 0) throw ConfigError("w-set: missing header in '" + path + "'");
  std::vector<CFourVector> out;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != 9) throw ConfigError("w-set: expected 9 columns in '" + path + "'");
    CFourVector w;
    for (int mu = 0; mu < 4; ++mu) w[mu] = cd(v[1 + mu], v[5 + mu]);
    out.push_back(w);
  }
  if (out.empty()) throw ConfigError("w-set: no rows in '" + path + "'");
  return out;
}

ResultTable run_verify_identities(const ExperimentConfig& c) {
  ResultTable t = start("verify-identities", c);
  const json& sec = section(c, "identities");
  identities::SuiteSpec spec;
  const int count = get_int(sec, "samples", "$.identities");
  if (count <= 0) throw ConfigError("config $.identities.samples: must be positive");
  spec.count = static_cast<std::size_t>(count);
  spec.seed = c.seed;
  spec.mass = c.mass;
  spec.rapidity_max = get_number_or(sec, "rapidity_max", 1.0, "$.identities");

  auto add_stats = [&](const std::string& experiment, const std::vector<identities::IdentityStats>& stats) {
    for (const auto& s : stats) {
      t.rows.push_back(check_le(experiment, kv("samples", static_cast<int>(s.samples)), s.name + "_max_residual",
                                s.max_residual, s.tolerance));
      t.report[experiment][s.name] = {{"max_residual", s.max_residual}, {"tolerance", s.tolerance}};
    }
  };
  {
    Stopwatch sw;
    const std::size_t first = t.rows.size();
    add_stats("analytic_identities", identities::analytic_identity_suite(spec));
    stamp(t, first, sw);
  }
  {
    Stopwatch sw;
    const std::size_t first = t.rows.size();
    add_stats("covariance", identities::covariance_suite(spec));
    stamp(t, first, sw);
  }
  if (sec.contains("operator_gauge")) {
    const json& og = sec["operator_gauge"];
    const std::string path = "$.identities.operator_gauge";
    Stopwatch sw;
    const std::size_t first = t.rows.size();
    SurfacePtr surface = parse_surface(og.at("surface"), path + ".surface");
    auto A = parse_field(og.at("field"), path + ".field");
    GaugeFunction Omega = parse_gauge(og.at("gauge"), path + ".gauge");
    GridPtr grid = grid_from(og, path, surface, false, {});
    const double eps = get_number(og, "epsilon", path);
    const double r = identities::operator_gauge_residual(grid, *A, Omega, eps, c.mass);
    t.rows.push_back(check_le("covariance", join({kv("N", grid->N), kv("L", grid->L), kv("eps", eps)}),
                              "operator_gauge_max_entry", r, kOperatorGaugeTol));
    t.report["covariance"]["operator_gauge"] = {{"max_entry", r}, {"N", grid->N}};
    stamp(t, first, sw);
  }
  return t;
}

ResultTable run_verify_bounds(const ExperimentConfig& c) {
  ResultTable t = start("verify-bounds", c);
  const json& sec = section(c, "bounds");
  const std::string path = "$.bounds";
  bounds::SampleSpec spec;
  const int count = get_int(sec, "samples", path);
  if (count < 0) throw ConfigError("config $.bounds.samples: must be non-negative");
  spec.count = static_cast<std::size_t>(count);
  spec.seed = c.seed;
  spec.mass = c.mass;
  spec.v_max = get_number_or(sec, "v_max", spec.v_max, path);
  spec.z_min = get_number_or(sec, "z_min", spec.z_min, path);
  spec.z_max = get_number_or(sec, "z_max", spec.z_max, path);
  spec.eps_max = get_number_or(sec, "eps_max", spec.eps_max, path);
  spec.u_rapidity_max = get_number_or(sec, "u_rapidity_max", spec.u_rapidity_max, path);

  Stopwatch sw;
  const std::vector<bounds::BoundCheck> checks = bounds::all_bounds(spec);
  for (const auto& b : checks) {
    const std::string params = kv("samples", static_cast<int>(b.samples));
    switch (b.kind) {
      case bounds::BoundKind::Upper:
        t.rows.push_back(check_le("bounds", params, b.name + "_fitted_constant", b.constant,
                                  std::numeric_limits<double>::max()));
        break;
      case bounds::BoundKind::Lower:
        t.rows.push_back(check_ge("bounds", params, b.name + "_fitted_constant", b.constant,
                                  std::numeric_limits<double>::min()));
        break;
      case bounds::BoundKind::Exact:
        t.rows.push_back(check_le("bounds", params, b.name + "_max_ratio", b.constant, 1.0 + kBoundExactSlack));
        break;
    }
    t.report["bounds"][b.name] = {{"constant", b.constant}, {"holds", b.holds}, {"samples", b.samples}};
  }
  stamp(t, 0, sw);
  return t;
}

ResultTable run_oracle_crosscheck(const ExperimentConfig& c) {
  ResultTable t = start("oracle-crosscheck", c);
  const json& sec = section(c, "oracle");
  const std::string path = "$.oracle";
  {
    Stopwatch sw;
    const std::size_t first = t.rows.size();
    const std::vector<CFourVector> ws = read_wset(resolve(c, get_string(sec, "wset", path)));
    oracle::MassShellQuadrature q;
    q.mass = c.mass;
    q.panels_per_period = get_int_or(sec, "panels_per_period", q.panels_per_period, path);
    oracle::MassShellQuadrature q2 = q;
    q2.panels_per_period *= 2;
    const bool self_check = sec.value("self_convergence", true);
    double max_d = 0.0, max_p = 0.0, max_self = 0.0;
    for (std::size_t k = 0; k < ws.size(); ++k) {
      const CFourVector& w = ws[k];
      const cd Dq = oracle::d_quadrature(w, q);
      const SpinorMatrix Pq = oracle::pminus_quadrature(w, q);
      const cd Da = d_eval(w, c.mass).D;
      const SpinorMatrix Pa = p_minus(w, c.mass);
      const double ed = std::abs(Da - Dq) / std::abs(Dq);
      const double ep = (Pa - Pq).norm() / Pq.norm();
      max_d = std::max(max_d, ed);
      max_p = std::max(max_p, ep);
      const std::string params = kv("w_id", static_cast<int>(k));
      t.rows.push_back(check_le("oracle_wset", params, "D_rel_error", ed, kOracleRelTol));
      t.rows.push_back(check_le("oracle_wset", params, "pminus_rel_error", ep, kOracleRelTol));
      t.series.push_back({"oracle_wset", "D_rel_error", static_cast<double>(k), ed});
      t.series.push_back({"oracle_wset", "pminus_rel_error", static_cast<double>(k), ep});
      if (self_check) {
        const cd Dq2 = oracle::d_quadrature(w, q2);
        max_self = std::max(max_self, std::abs(Dq2 - Dq) / std::abs(Dq2));
      }
    }
    if (self_check)
      t.rows.push_back(check_le("oracle_wset", kv("panels_per_period", q.panels_per_period),
                                "D_panel_doubling_change", max_self, kOracleSelfConvergence));
    t.report["oracle_wset"] = {{"points", ws.size()}, {"max_D_rel_error", max_d}, {"max_pminus_rel_error", max_p},
                               {"panel_doubling_change", max_self}};
    stamp(t, first, sw);
  }
  if (sec.contains("flat_projector")) {
    const json& fp = sec["flat_projector"];
    const std::string p = path + ".flat_projector";
    Stopwatch sw;
    const std::size_t first = t.rows.size();
    GridPtr grid = grid_from(fp, p, std::make_shared<FlatSurface>(), true, {});
    const std::vector<double> eps = get_numbers(fp, "epsilon", p);
    for (double e : eps)
      if (!(e > 0.0)) throw ConfigError("config " + p + ".epsilon: entries must be positive");
    const DiscretizedOperator oracle_op = pminus_flat_oracle(grid, c.mass);
    double off = 0.0;
    const double defect = periodic_projector_defect(oracle_op, c.mass, &off);
    const double sa = periodic_self_adjoint_defect(oracle_op, c.mass);
    const std::string gp = join({kv("N", grid->N), kv("L", grid->L)});
    t.rows.push_back(check_le("flat_projector", gp, "oracle_projector_defect", defect, kOracleProjectorDefect));
    t.rows.push_back(check_le("flat_projector", gp, "oracle_self_adjoint_defect", sa, kOracleProjectorDefect));
    t.rows.push_back(check_le("flat_projector", gp, "oracle_off_block_norm", off, kOracleProjectorDefect));
    std::vector<double> dist;
    json jd = json::array();
    for (double e : eps) {
      const double d = periodic_op_norm(pminus_regularized(grid, e, c.mass, c.u) - oracle_op, c.mass, &off);
      dist.push_back(d);
      t.rows.push_back(info("flat_projector", join({gp, kv("eps", e)}), "op_norm_distance", d));
      t.series.push_back({"flat_projector", "op_norm_distance", e, d});
      jd.push_back({{"eps", e}, {"distance", d}, {"off_block", off}});
    }
    t.rows.push_back(check_ge("flat_projector", gp, "monotone_convergence", strictly_decreasing(dist) ? 1.0 : 0.0,
                              1.0));
    t.report["flat_projector"] = {{"N", grid->N},     {"L", grid->L}, {"projector_defect", defect},
                                  {"self_adjoint_defect", sa}, {"distances", jd}};
    stamp(t, first, sw);
  }
  return t;
}

ResultTable run_dichotomy(const ExperimentConfig& c) {
  ResultTable t = start("dichotomy", c);
  const json& sec = section(c, "dichotomy");
  const std::string path = "$.dichotomy";
  SurfacePtr surface = parse_surface(sec.at("surface"), path + ".surface");
  const double L = get_number(sec, "L", path);
  require_space_like(*surface, L, path);
  const std::vector<int> Ns = refinement_list(sec, path, 3);
  const QuadratureRule rule = parse_rule(sec, "rule", path);
  FieldPtr A = parse_field(sec.at("field"), path + ".field");
  const json& pairs = sec.at("pairs");
  if (!pairs.is_array() || pairs.empty()) throw ConfigError("config " + path + ".pairs: expected a non-empty array");

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const json& pj = pairs[k];
    const std::string pp = path + ".pairs[" + std::to_string(k) + "]";
    const std::string name = get_string(pj, "name", pp);
    const std::string type = get_string(pj, "type", pp);
    FieldPtr B;
    if (type == "identical") {
      B = A;
    } else if (type == "normal") {
      Bump bump{get_four_vector(pj, "center", pp), get_number(pj, "radius", pp)};
      B = std::make_shared<SumField>(
          A, std::make_shared<NormalPerturbation>(surface, get_number(pj, "amplitude", pp), bump));
    } else if (type == "bump") {
      B = std::make_shared<SumField>(A, parse_field(pj.at("field"), pp + ".field"));
    } else if (type == "gauge") {
      B = gauge_transform(A, parse_gauge(pj.at("gauge"), pp + ".gauge"));
    } else {
      throw ConfigError("config " + pp + ".type: expected identical, normal, bump or gauge");
    }
    const std::string expect = get_string(pj, "expect", pp);
    if (expect != "convergent" && expect != "divergent")
      throw ConfigError("config " + pp + ".expect: expected 'convergent' or 'divergent'");

    Stopwatch sw;
    const std::size_t first = t.rows.size();
    const DichotomyTable tab = tangential_dichotomy_experiment(*A, *B, surface, L, Ns, c.mass, rule);
    const std::string experiment = "dichotomy_" + name;
    json jrows = json::array();
    for (const auto& r : tab.rows) {
      t.rows.push_back(info(experiment, join({kv("N", r.N), kv("h", r.h)}), "hs_norm", r.hs_norm));
      t.series.push_back({experiment, "hs_norm_squared_vs_h", r.h, r.hs_norm * r.hs_norm});
      jrows.push_back({{"N", r.N}, {"h", r.h}, {"hs_norm", r.hs_norm}});
    }
    const std::string params = kv("L", L);
    t.rows.push_back(info(experiment, params, "tangential_difference", tab.tangential_difference));
    std::string classification;
    if (expect == "convergent") {
      double change = 0.0;
      for (const auto& r : tab.rows) change = std::max(change, relative_change(tab.rows.front().hs_norm, r.hs_norm));
      t.rows.push_back(check_le(experiment, params, "hs_norm_max_relative_change", change, kConvergentChange));
      classification = change <= kConvergentChange ? "convergent" : "divergent";
    } else {
      t.rows.push_back(info(experiment, params, "alpha", tab.alpha));
      t.rows.push_back(
          check_range(experiment, params, "growth_factor_per_halving", tab.growth_factor, kGrowthLower, kGrowthUpper));
      classification = tab.growth_factor >= kGrowthLower ? "divergent" : "convergent";
    }
    t.report["pairs"][name] = {{"type", type},
                               {"expect", expect},
                               {"classification", classification},
                               {"identical", tab.identical},
                               {"tangential_difference", tab.tangential_difference},
                               {"alpha", tab.alpha},
                               {"growth_factor", tab.growth_factor},
                               {"rows", jrows}};
    stamp(t, first, sw);
  }
  return t;
}

ResultTable run_representative(const ExperimentConfig& c) {
  ResultTable t = start("representative", c);
  const json& sec = section(c, "representative");
  const std::string path = "$.representative";
  const double L = get_number(sec, "L", path);
  const std::vector<int> Ns = refinement_list(sec, path, 2);
  FieldPtr A = parse_field(sec.at("field"), path + ".field");
  const int defect_N_max = get_int_or(sec, "defect_N_max", 8, path);
  const std::string sym = sec.value("lattice_symbol", std::string("naive"));
  LatticeSymbol symbol;
  if (sym == "naive")
    symbol = LatticeSymbol::Naive;
  else if (sym == "exact")
    symbol = LatticeSymbol::Exact;
  else
    throw ConfigError("config " + path + ".lattice_symbol: expected 'naive' or 'exact'");
  SurfacePtr flat = std::make_shared<FlatSurface>();

  std::vector<double> hs;
  json jrows = json::array();
  for (int N : Ns) {
    Stopwatch sw;
    const std::size_t first = t.rows.size();
    GridPtr grid = make_grid(flat, L, N, QuadratureRule::Midpoint, true, A->support(), 0.0);
    const BlockRepresentativeReport r = representative_experiment(grid, *A, c.mass, N <= defect_N_max, symbol);
    const std::string params = join({kv("N", N), kv("h", r.h)});
    t.rows.push_back(check_le("representative", params, "q_skew_defect", r.q_skew_defect, kRepresentativeDefect));
    t.rows.push_back(check_le("representative", params, "q_diagonal_block_defect", r.q_diagonal_block_defect,
                              kRepresentativeDefect));
    if (r.unitarity_defect >= 0.0)
      t.rows.push_back(
          check_le("representative", params, "unitarity_defect", r.unitarity_defect, kRepresentativeDefect));
    if (r.pi_projector_defect >= 0.0)
      t.rows.push_back(check_le("representative", params, "pi_projector_defect", r.pi_projector_defect,
                                kRepresentativeDefect + r.oracle_projector_defect));
    t.rows.push_back(info("representative", params, "oracle_projector_defect", r.oracle_projector_defect));
    t.rows.push_back(info("representative", params, "q_op_norm", r.q_op_norm));
    t.rows.push_back(info("representative", params, "hs_pi_minus_pa", r.hs_pi_minus_pa));
    t.rows.push_back(info("representative", params, "hs_pa_minus_pminus", r.hs_pa_minus_pminus));
    t.series.push_back({"representative", "hs_pi_minus_pa", r.h, r.hs_pi_minus_pa});
    t.series.push_back({"representative", "hs_pa_minus_pminus", r.h, r.hs_pa_minus_pminus});
    hs.push_back(r.hs_pi_minus_pa);
    jrows.push_back({{"N", N},
                     {"h", r.h},
                     {"q_skew_defect", r.q_skew_defect},
                     {"q_diagonal_block_defect", r.q_diagonal_block_defect},
                     {"unitarity_defect", r.unitarity_defect},
                     {"pi_projector_defect", r.pi_projector_defect},
                     {"oracle_projector_defect", r.oracle_projector_defect},
                     {"hs_pi_minus_pa", r.hs_pi_minus_pa},
                     {"hs_pa_minus_pminus", r.hs_pa_minus_pminus},
                     {"q_op_norm", r.q_op_norm}});
    stamp(t, first, sw);
  }
  const double change = relative_change(hs.front(), hs.back());
  t.rows.push_back(check_le("representative", join({kv("N_from", Ns.front()), kv("N_to", Ns.back())}),
                            "hs_pi_minus_pa_relative_change", change, kRepresentativeChange));
  t.report["representative"] = {{"L", L}, {"lattice_symbol", sym}, {"rows", jrows}, {"relative_change", change}};
  return t;
}

ResultTable run_flow(const ExperimentConfig& c) {
  ResultTable t = start("flow", c);
  const json& sec = section(c, "flow");
  const std::string path = "$.flow";
  FamilyPtr family = parse_family(sec.at("family"), path + ".family");
  FieldPtr A = parse_field(sec.at("field"), path + ".field");
  const double s = get_number(sec, "s", path);
  const Vec3 center = sec.contains("center") ? get_vec3(sec, "center", path) : Vec3::Zero();

  {
    Stopwatch sw;
    const std::size_t first = t.rows.size();
    const double eps = get_number(sec, "epsilon", path);
    const std::vector<double> zr = get_numbers(sec, "z_range", path);
    if (zr.size() != 2 || !(zr[0] > 0.0 && zr[1] > zr[0]))
      throw ConfigError("config " + path + ".z_range: expected [z_min, z_max] with 0 < z_min < z_max");
    const int count = get_int(sec, "z_count", path);
    if (count < 20) throw ConfigError("config " + path + ".z_count: at least 20 samples are required");
    const ScalingFit fit = residual_scaling(*family, s, *A, eps, log_spaced(zr[0], zr[1], count), c.mass, center);
    const std::string params = join({kv("s", s), kv("eps", eps)});
    if (fit.status == FitStatus::ZeroField) {
      t.rows.push_back(info("flow_scaling", params, "zero_field", 1.0));
      t.report["scaling"] = {{"status", "zero_field"}};
    } else {
      t.rows.push_back(check_ge("flow_scaling", params, "slope_with_s", fit.slope_with_s, kSlopeWithS));
      t.rows.push_back(check_le("flow_scaling", params, "slope_without_s", fit.slope_without_s, kSlopeWithoutS));
      t.rows.push_back(check_ge("flow_scaling", params, "slope_gap", fit.slope_gap, kSlopeGap));
      t.rows.push_back(info("flow_scaling", params, "max_leading_residual", fit.max_leading_residual));
      json jrows = json::array();
      for (const auto& r : fit.rows) {
        t.series.push_back({"flow_scaling", "without_s", r.z_norm, r.without_s});
        t.series.push_back({"flow_scaling", "with_s", r.z_norm, r.with_s});
        t.series.push_back({"flow_scaling", "leading_residual", r.z_norm, r.leading_residual});
        jrows.push_back({{"z", r.z_norm}, {"without_s", r.without_s}, {"with_s", r.with_s},
                         {"leading_residual", r.leading_residual}});
      }
      t.report["scaling"] = {{"slope_without_s", fit.slope_without_s}, {"slope_with_s", fit.slope_with_s},
                             {"slope_gap", fit.slope_gap}, {"max_leading_residual", fit.max_leading_residual},
                             {"rows", jrows}};
    }
    stamp(t, first, sw);
  }
  if (sec.contains("epsilon_scan")) {
    const json& es = sec["epsilon_scan"];
    const std::string p = path + ".epsilon_scan";
    Stopwatch sw;
    const std::size_t first = t.rows.size();
    const double z = get_number(es, "z", p);
    const std::vector<double> eps = get_numbers(es, "epsilon", p);
    const EpsilonFit fit = epsilon_scaling(*family, s, *A, z, eps, c.mass, center);
    const std::string params = join({kv("s", s), kv("z", z)});
    for (std::size_t k = 0; k < fit.eps.size(); ++k) {
      t.rows.push_back(info("flow_epsilon", join({params, kv("eps", fit.eps[k])}), "distance_to_limit",
                            fit.distance[k]));
      t.series.push_back({"flow_epsilon", "distance_to_limit", fit.eps[k], fit.distance[k]});
    }
    t.rows.push_back(
        check_range("flow_epsilon", params, "epsilon_exponent", fit.exponent, kEpsExponentLower, kEpsExponentUpper));
    t.report["epsilon_scan"] = {{"z", z}, {"eps", fit.eps}, {"distance", fit.distance}, {"exponent", fit.exponent}};
    stamp(t, first, sw);
  }
  if (sec.contains("remainder")) {
    const json& rj = sec["remainder"];
    const std::string p = path + ".remainder";
    const std::vector<double> slices = get_numbers(rj, "slices", p);
    const double L = get_number(rj, "L", p);
    const std::vector<int> Ns = refinement_list(rj, p, 2);
    std::vector<RemainderReport> reps;
    for (int N : Ns) {
      Stopwatch sw;
      const std::size_t first = t.rows.size();
      reps.push_back(remainder_hs_estimate(*family, slices, *A, L, N, c.mass));
      for (const auto& sl : reps.back().slices) {
        t.rows.push_back(info("flow_remainder", join({kv("N", N), kv("s", sl.s)}), "hs_norm", sl.hs_norm));
        t.series.push_back({"flow_remainder", "hs_norm_N" + std::to_string(N), sl.s, sl.hs_norm});
      }
      t.rows.push_back(check_le("flow_remainder", kv("N", N), "sup_hs_norm", reps.back().sup,
                                std::numeric_limits<double>::max()));
      stamp(t, first, sw);
    }
    double drift = 0.0;
    json jslices = json::array();
    for (std::size_t k = 0; k < slices.size(); ++k) {
      const double d = relative_change(reps.back().slices[k].hs_norm, reps.front().slices[k].hs_norm);
      drift = std::max(drift, d);
      json js = {{"s", slices[k]}, {"drift", d}};
      for (const auto& r : reps) js["hs_N" + std::to_string(r.N)] = r.slices[k].hs_norm;
      jslices.push_back(js);
    }
    t.rows.push_back(check_le("flow_remainder", join({kv("N_from", Ns.front()), kv("N_to", Ns.back())}),
                              "max_slice_drift", drift, kRemainderDrift));
    t.report["remainder"] = {{"L", L}, {"slices", jslices}, {"max_drift", drift}};
  }
  if (sec.contains("static_check")) {
    const json& sj = sec["static_check"];
    const std::string p = path + ".static_check";
    Stopwatch sw;
    const std::size_t first = t.rows.size();
    StaticFamily fam(parse_surface(sj.at("surface"), p + ".surface"));
    const RemainderReport r = remainder_hs_estimate(fam, get_numbers(sj, "slices", p), *A, get_number(sj, "L", p),
                                                    get_int(sj, "N", p), c.mass);
    double spread = 0.0;
    for (const auto& sl : r.slices) spread = std::max(spread, relative_change(r.slices.front().hs_norm, sl.hs_norm));
    t.rows.push_back(check_le("flow_static", kv("N", r.N), "hs_norm_spread_over_s", spread, kStaticConstancy));
    t.report["static_check"] = {{"spread", spread}, {"hs_norm", r.slices.front().hs_norm}};
    stamp(t, first, sw);
  }
  return t;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"verify-identities", "verify-bounds", "dichotomy",
                                                 "representative",    "flow",          "oracle-crosscheck"};
  return names;
}

ResultTable run_command(const std::string& name, const ExperimentConfig& c) {
  if (name == "verify-identities") return run_verify_identities(c);
  if (name == "verify-bounds") return run_verify_bounds(c);
  if (name == "dichotomy") return run_dichotomy(c);
  if (name == "representative") return run_representative(c);
  if (name == "flow") return run_flow(c);
  if (name == "oracle-crosscheck") return run_oracle_crosscheck(c);
  throw ConfigError("unknown command '" + name + "'");
}

}  // namespace qedcs::app
