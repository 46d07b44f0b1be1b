#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qedcs/kernels.hpp"
#include "qedcs/oracle.hpp"
#include "qedcs_app/config.hpp"
#include "qedcs_app/experiments.hpp"

namespace {

using namespace qedcs;
using app::ResultRow;
using app::ResultTable;

// Pinned acceptance tolerances.
constexpr double kOracleRel = 1e-6;
constexpr double kOracleSeconds = 120.0;
constexpr double kKleinGordon = 1e-9;
constexpr double kLorentzSymmetry = 1e-10;
constexpr double kR2Identity = 1e-8;
constexpr double kDiracAnnihilation = 1e-9;
constexpr double kIdentitySeconds = 60.0;
constexpr double kGaugeKernel = 1e-15;
constexpr double kLorentzKernel = 1e-10;
constexpr double kOperatorGauge = 1e-15;
constexpr double kBoundSamples = 1e4;
constexpr double kExactSlack = 1e-10;
constexpr double kBoundSeconds = 180.0;
constexpr double kFlatProjectorDefect = 1e-12;
constexpr int kFlatProjectorN = 10;
constexpr double kConvergentChange = 0.10;
constexpr double kGrowthLower = 1.6;
constexpr double kGrowthUpper = 2.6;
constexpr double kDichotomySeconds = 900.0;
constexpr double kRepresentativeDefect = 1e-10;
constexpr double kRepresentativeChange = 0.10;
constexpr double kSlopeWithS = -1.3;
constexpr double kSlopeWithoutS = -2.5;
constexpr double kEpsExponentLower = 0.4;
constexpr double kEpsExponentUpper = 0.6;
constexpr double kRemainderDrift = 0.15;
constexpr double kFlowSeconds = 600.0;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

class Timer {
public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<const ResultRow*> rows(const ResultTable& t, const std::string& experiment, const std::string& metric) {
  std::vector<const ResultRow*> out;
  for (const auto& r : t.rows)
    if (r.experiment == experiment && r.metric == metric) out.push_back(&r);
  return out;
}

double max_value(const ResultTable& t, const std::string& experiment, const std::string& metric, Verdict& v) {
  const auto rs = rows(t, experiment, metric);
  if (rs.empty()) {
    v.require(false, experiment + "/" + metric + " missing");
    return std::numeric_limits<double>::quiet_NaN();
  }
  double m = -std::numeric_limits<double>::infinity();
  for (const auto* r : rs) m = std::max(m, r->value);
  return m;
}

double single(const ResultTable& t, const std::string& experiment, const std::string& metric, Verdict& v) {
  return max_value(t, experiment, metric, v);
}

std::string config_path;

app::ExperimentConfig config() { return app::load_config(config_path, false, std::nullopt); }

Verdict criterion1() {
  Verdict v;
  const app::ExperimentConfig c = config();
  const auto& sec = app::section(c, "oracle");
  const std::string wset = (std::filesystem::path(c.source_dir) / app::get_string(sec, "wset", "$.oracle")).string();
  Timer timer;
  const std::vector<CFourVector> ws = app::read_wset(wset);
  double ed = 0.0, ep = 0.0;
  for (const CFourVector& w : ws) {
    const cd dq = oracle::d_quadrature(w, {c.mass, 2, 1e-12});
    const cd da = d_eval(w, c.mass).D;
    ed = std::max(ed, std::abs(dq - da) / std::abs(da));
    const SpinorMatrix pq = oracle::pminus_quadrature(w, {c.mass, 2, 1e-12});
    const SpinorMatrix pa = p_minus(w, c.mass);
    ep = std::max(ep, (pq - pa).norm() / pa.norm());
  }
  const double secs = timer.seconds();
  v.require(ws.size() == 20, "w-set size " + std::to_string(ws.size()));
  v.require(ed <= kOracleRel, "D rel error " + fmt(ed));
  v.require(ep <= kOracleRel, "p- rel error " + fmt(ep));
  v.require(secs <= kOracleSeconds, "runtime " + fmt(secs) + " s");
  return v;
}

Verdict criterion2() {
  Verdict v;
  const app::ExperimentConfig c = config();
  v.require(app::get_int(app::section(c, "identities"), "samples", "$.identities") >= 1000, "at least 1000 samples");
  Timer timer;
  const ResultTable t = app::run_verify_identities(c);
  const double secs = timer.seconds();
  const std::string e = "analytic_identities";
  const double kg = single(t, e, "klein_gordon_max_residual", v);
  const double ls = single(t, e, "lorentz_symmetry_max_residual", v);
  const double r2 = single(t, e, "r2_dslash_d_identity_max_residual", v);
  const double di = single(t, e, "dirac_annihilation_max_residual", v);
  v.require(kg <= kKleinGordon, "Klein-Gordon " + fmt(kg));
  v.require(ls <= kLorentzSymmetry, "Lorentz symmetry " + fmt(ls));
  v.require(r2 <= kR2Identity, "r^2 dslash D identity " + fmt(r2));
  v.require(di <= kDiracAnnihilation, "Dirac annihilation " + fmt(di));
  v.require(secs <= kIdentitySeconds, "runtime " + fmt(secs) + " s");
  return v;
}

Verdict criterion3() {
  Verdict v;
  const ResultTable t = app::run_verify_identities(config());
  const double g = single(t, "covariance", "gauge_kernel_max_residual", v);
  const double l = single(t, "covariance", "lorentz_kernel_max_residual", v);
  const double o = single(t, "covariance", "operator_gauge_max_entry", v);
  v.require(g <= kGaugeKernel, "gauge kernel " + fmt(g));
  v.require(l <= kLorentzKernel, "Lorentz kernel " + fmt(l));
  v.require(o <= kOperatorGauge, "operator gauge max entry " + fmt(o));
  return v;
}

Verdict criterion4() {
  Verdict v;
  const app::ExperimentConfig c = config();
  v.require(app::get_int(app::section(c, "bounds"), "samples", "$.bounds") >= kBoundSamples, "at least 1e4 samples");
  Timer timer;
  const ResultTable t = app::run_verify_bounds(c);
  const double secs = timer.seconds();
  int upper = 0, lower = 0, exact = 0;
  for (const auto& r : t.rows) {
    if (r.experiment != "bounds") continue;
    const bool is_ratio = r.metric.size() > 10 && r.metric.ends_with("_max_ratio");
    if (is_ratio) {
      ++exact;
      v.require(r.value <= 1.0 + kExactSlack, r.metric + " " + fmt(r.value));
    } else if (r.comparison == app::Comparison::GreaterEqual) {
      ++lower;
      v.require(std::isfinite(r.value) && r.value > 0.0, r.metric + " " + fmt(r.value));
    } else {
      ++upper;
      v.require(std::isfinite(r.value), r.metric + " " + fmt(r.value));
    }
  }
  v.require(upper >= 8 && lower >= 1 && exact >= 7,
            std::to_string(upper) + " upper, " + std::to_string(lower) + " lower, " + std::to_string(exact) + " exact");
  v.require(secs <= kBoundSeconds, "runtime " + fmt(secs) + " s");
  return v;
}

Verdict criterion5() {
  Verdict v;
  const app::ExperimentConfig c = config();
  const auto& fp = app::section(c, "oracle").at("flat_projector");
  v.require(app::get_int(fp, "N", "$.oracle.flat_projector") == kFlatProjectorN, "N = 10");
  const ResultTable t = app::run_oracle_crosscheck(c);
  const double d = single(t, "flat_projector", "oracle_projector_defect", v);
  v.require(d <= kFlatProjectorDefect, "oracle projector defect " + fmt(d));
  std::vector<double> dist;
  std::string series;
  for (const auto* r : rows(t, "flat_projector", "op_norm_distance")) {
    dist.push_back(r->value);
    series += (series.empty() ? "" : " > ") + fmt(r->value);
  }
  bool monotone = dist.size() == 3;
  for (std::size_t k = 1; k < dist.size(); ++k) monotone = monotone && dist[k] < dist[k - 1];
  v.require(monotone, "operator-norm distance over eps {0.4, 0.2, 0.1}: " + series);
  return v;
}

Verdict criterion6() {
  Verdict v;
  Timer timer;
  const ResultTable t = app::run_dichotomy(config());
  const double secs = timer.seconds();
  int convergent = 0, divergent = 0;
  for (const auto& r : t.rows) {
    if (r.metric == "hs_norm_max_relative_change") {
      ++convergent;
      v.require(r.value <= kConvergentChange, r.experiment + " relative change " + fmt(r.value));
    } else if (r.metric == "growth_factor_per_halving") {
      ++divergent;
      v.require(r.value >= kGrowthLower && r.value <= kGrowthUpper, r.experiment + " growth factor " + fmt(r.value));
    }
  }
  v.require(convergent >= 1 && divergent >= 1, "pairs: " + std::to_string(convergent) + " tangentially equal, " +
                                                   std::to_string(divergent) + " tangentially different");
  v.require(secs <= kDichotomySeconds, "runtime " + fmt(secs) + " s");
  return v;
}

Verdict criterion7() {
  Verdict v;
  const ResultTable t = app::run_representative(config());
  const std::string e = "representative";
  const double skew = max_value(t, e, "q_skew_defect", v);
  const double diag = max_value(t, e, "q_diagonal_block_defect", v);
  const double unit = max_value(t, e, "unitarity_defect", v);
  v.require(skew <= kRepresentativeDefect, "Q skew defect " + fmt(skew));
  v.require(diag <= kRepresentativeDefect, "Q diagonal blocks " + fmt(diag));
  v.require(unit <= kRepresentativeDefect, "e^Q unitarity defect " + fmt(unit));
  const auto pi = rows(t, e, "pi_projector_defect");
  const auto oracle = rows(t, e, "oracle_projector_defect");
  v.require(!pi.empty(), "Pi projector defect computed");
  for (const auto* r : pi) {
    double od = 0.0;
    for (const auto* o : oracle)
      if (o->parameters == r->parameters) od = o->value;
    v.require(r->value <= kRepresentativeDefect + od, "Pi projector defect " + fmt(r->value));
  }
  const auto hs = rows(t, e, "hs_pi_minus_pa");
  v.require(hs.size() >= 2, "refinement levels " + std::to_string(hs.size()));
  if (hs.size() >= 2) {
    const double a = hs.front()->value, b = hs.back()->value;
    const double change = std::abs(b - a) / a;
    v.require(change <= kRepresentativeChange,
              "hs(Pi - P^A) " + fmt(a) + " -> " + fmt(b) + ", change " + fmt(change));
  }
  return v;
}

Verdict criterion8() {
  Verdict v;
  const app::ExperimentConfig c = config();
  v.require(app::get_number(app::section(c, "flow"), "epsilon", "$.flow") == 1e-4, "eps = 1e-4");
  Timer timer;
  const ResultTable t = app::run_flow(c);
  const double secs = timer.seconds();
  const double with_s = single(t, "flow_scaling", "slope_with_s", v);
  const double without_s = single(t, "flow_scaling", "slope_without_s", v);
  const double expo = single(t, "flow_epsilon", "epsilon_exponent", v);
  v.require(with_s >= kSlopeWithS, "slope with s " + fmt(with_s));
  v.require(without_s <= kSlopeWithoutS, "slope without s " + fmt(without_s));
  v.require(expo >= kEpsExponentLower && expo <= kEpsExponentUpper, "eps exponent " + fmt(expo));
  bool finite = true;
  for (const auto* r : rows(t, "flow_remainder", "hs_norm")) finite = finite && std::isfinite(r->value);
  v.require(finite, "per-slice HS norms finite");
  const double drift = single(t, "flow_remainder", "max_slice_drift", v);
  v.require(drift <= kRemainderDrift, "refinement drift " + fmt(drift));
  v.require(secs <= kFlowSeconds, "runtime " + fmt(secs) + " s");
  return v;
}

// The results CSV with the elapsed_s column removed.
std::string strip_timing(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::string line, out;
  while (std::getline(in, line)) {
    const auto cut = line.rfind(',');
    out += line.substr(0, cut) + "\n";
  }
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict criterion9() {
  Verdict v;
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "qedcs_acceptance_repro";
  fs::remove_all(base);
  for (const char* cmd : {"verify-identities", "verify-bounds"}) {
    std::vector<fs::path> dirs;
    for (int run = 0; run < 2; ++run) {
      const fs::path dir = base / (std::string(cmd) + "_" + std::to_string(run));
      fs::create_directories(dir);
      const std::string line = std::string("\"") + QEDCS_CLI_PATH + "\" " + cmd + " --config \"" + config_path +
                               "\" --out \"" + dir.string() + "\" > /dev/null 2>&1";
      const int status = std::system(line.c_str());
      v.require(WIFEXITED(status) && WEXITSTATUS(status) != 1, std::string(cmd) + " run " + std::to_string(run));
      dirs.push_back(dir);
    }
    const std::string a = strip_timing(dirs[0] / (std::string(cmd) + ".csv"));
    const std::string b = strip_timing(dirs[1] / (std::string(cmd) + ".csv"));
    v.require(!a.empty() && a == b, std::string(cmd) + " results identical");
    const std::string sa = slurp(dirs[0] / (std::string(cmd) + "_series.csv"));
    const std::string sb = slurp(dirs[1] / (std::string(cmd) + "_series.csv"));
    v.require(sa == sb, std::string(cmd) + " series identical");
  }
  fs::remove_all(base);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Acceptance checks"};
  int only = 0;
  config_path = std::string(QEDCS_SOURCE_DIR) + "/configs/default.json";
  cli.add_option("--criterion", only, "Run a single criterion (1-9)")->check(CLI::Range(1, 9));
  cli.add_option("--config", config_path, "Experiment configuration");
  CLI11_PARSE(cli, argc, argv);

  const std::vector<std::function<Verdict()>> criteria = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                                          criterion6, criterion7, criterion8, criterion9};
  bool all = true;
  for (int k = 1; k <= 9; ++k) {
    if (only != 0 && k != only) continue;
    Verdict v;
    try {
      v = criteria[k - 1]();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("error: ") + e.what();
    }
    std::printf("criterion %d: %s | %s\n", k, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
