// Command-line front end: builds bases, runs scenario Monte Carlo, reproduces
// the reference tables and fits fMRI slices. Exit 0 ok, 1 numerical, 2 config/IO.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hfanova/config.hpp"
#include "hfanova/csv.hpp"
#include "hfanova/error.hpp"
#include "hfanova/fmri_design.hpp"
#include "hfanova/gls_estimator.hpp"
#include "hfanova/parallel.hpp"
#include "hfanova/rng.hpp"
#include "hfanova/scenario.hpp"

namespace fs = std::filesystem;
using namespace hfanova;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  long long seed = -1;
  unsigned threads = 0;
  std::string out = "out";
  double pd_floor = -1.0;
  std::string truncation_mode;
};

Config load_config(const Common& c) {
  Config cfg;
  if (!c.config_path.empty()) cfg = Config::load(c.config_path);
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (c.seed >= 0) cfg.set("seed", std::to_string(c.seed));
  if (c.pd_floor >= 0.0) cfg.set("pd_floor", format_number(c.pd_floor));
  if (!c.truncation_mode.empty()) cfg.set("truncation_mode", c.truncation_mode);
  return cfg;
}

// Every output directory gets the full effective configuration; its hash
// stamps each CSV.
class Output {
 public:
  Output(const std::string& dir, const Config& effective) : dir_(dir), effective_(effective) {
    fs::create_directories(dir_);
    std::ofstream os(dir_ / "config.ini", std::ios::binary);
    os << effective_.canonical();
    if (!os) throw ConfigError("cannot write " + (dir_ / "config.ini").string());
  }

  std::ofstream open(const std::string& name, const std::string& units) const {
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + (dir_ / name).string());
    csv_comment(os, "config_hash=" + effective_.hash_hex() + " units=" + units);
    return os;
  }

  static void close(std::ofstream& os, const std::string& name) {
    os.close();
    if (!os) throw ConfigError("write failed for " + name);
  }

 private:
  fs::path dir_;
  Config effective_;
};

Config effective_config(const ScenarioConfig& scenario, const Config& extra = {}) {
  std::ostringstream os;
  write_scenario_config(os, scenario);
  std::istringstream is(os.str());
  Config cfg = Config::parse(is);
  for (const auto& [k, v] : extra.entries()) cfg.set(k, v);
  return cfg;
}

const char* kCoefUnits = "coefficients of the orthonormal Laplacian eigenbasis (field units)";

int cmd_basis(const Common& c) {
  const ScenarioConfig sc = scenario_from_config(load_config(c));
  const auto basis = build_basis(sc.domain, sc.steps, sc.truncation);
  Output out(c.out, effective_config(sc));
  auto os = out.open("basis.csv", "eigenvalue 1/length^2, normalization 1/length");
  write_basis_csv(os, basis);
  Output::close(os, "basis.csv");
  auto gs = out.open("grid.csv", "coordinates length, weight length^2");
  write_grid_csv(gs, basis.grid());
  Output::close(gs, "grid.csv");
  std::cout << "basis: " << basis.size() << " eigenpairs on " << basis.nodes()
            << " nodes, Gram deviation " << format_number(basis.gram_deviation()) << '\n';
  return 0;
}

int cmd_simulate(const Common& c) {
  const ScenarioConfig sc = scenario_from_config(load_config(c));
  const ScenarioSetup setup = prepare(sc);
  const Eigen::MatrixXd y = simulate_response(setup, substream_seed(sc.seed, {fnv1a("replicate"), 0}));
  Output out(c.out, effective_config(sc));
  auto ys = out.open("response.csv", kCoefUnits);
  csv_row(ys, "observation", "k", "value");
  for (Eigen::Index i = 0; i < y.rows(); ++i)
    for (Eigen::Index k = 0; k < y.cols(); ++k) csv_row(ys, i, k + 1, y(i, k));
  Output::close(ys, "response.csv");
  auto bs = out.open("beta.csv", kCoefUnits);
  csv_row(bs, "component", "k", "value");
  for (Eigen::Index s = 0; s < setup.beta.coefficients.cols(); ++s)
    for (Eigen::Index k = 0; k < setup.beta.coefficients.rows(); ++k)
      csv_row(bs, s + 1, k + 1, setup.beta.coefficients(k, s));
  Output::close(bs, "beta.csv");
  auto xs = out.open("design.csv", "dimensionless");
  csv_row(xs, "observation", "column", "value");
  for (Eigen::Index i = 0; i < setup.X.rows(); ++i)
    for (Eigen::Index s = 0; s < setup.X.cols(); ++s) csv_row(xs, i, s + 1, setup.X(i, s));
  Output::close(xs, "design.csv");
  std::cout << "simulate: n=" << sc.n << " TR=" << setup.basis.size() << '\n';
  return 0;
}

int cmd_fit(const Common& c, bool fanova_only) {
  const ScenarioConfig sc = scenario_from_config(load_config(c));
  const ScenarioSetup setup = prepare(sc);
  const ScenarioResult r = run_scenario(setup, sc, resolve_threads(c.threads));
  Output out(c.out, effective_config(sc));
  if (!fanova_only) {
    auto es = out.open("efmse.csv", "squared field norm");
    csv_row(es, "scenario", "replicates", "efmse_beta", "efmse_y");
    csv_row(es, sc.id, sc.replicates, r.efmse_beta, r.efmse_y);
    Output::close(es, "efmse.csv");
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(setup.beta.coefficients.rows(),
                                                 setup.beta.coefficients.cols());
    for (const auto& b : r.beta_hat) mean += b;
    mean /= static_cast<double>(r.beta_hat.size());
    auto bs = out.open("beta_hat.csv", kCoefUnits);
    csv_row(bs, "component", "k", "truth", "mean_estimate");
    for (Eigen::Index s = 0; s < mean.cols(); ++s)
      for (Eigen::Index k = 0; k < mean.rows(); ++k)
        csv_row(bs, s + 1, k + 1, setup.beta.coefficients(k, s), mean(k, s));
    Output::close(bs, "beta_hat.csv");
    if (sc.grid_metrics) {
      auto ls = out.open("linf.csv", "squared field value");
      csv_row(ls, "node", "x", "y", "linf_beta", "linf_y");
      const auto& g = setup.basis.grid();
      for (Eigen::Index j = 0; j < r.linf_beta.size(); ++j)
        csv_row(ls, j, g.x[j], g.y[j], r.linf_beta[j], r.linf_y[j]);
      Output::close(ls, "linf.csv");
    }
    std::cout << sc.id << ": EFMSE_beta=" << format_number(r.efmse_beta)
              << " EFMSE_Y=" << format_number(r.efmse_y) << '\n';
  }
  auto fs_ = out.open("fanova.csv", "sums of squares in Lambda^-1 metric, F dimensionless");
  csv_row(fs_, "replicate", "sst", "sse", "ssr", "f_value");
  for (std::size_t v = 0; v < r.fanova.size(); ++v) {
    const auto& f = r.fanova[v];
    csv_row(fs_, v, f.sst, f.sse, f.ssr, f.f_value);
  }
  Output::close(fs_, "fanova.csv");
  std::cout << sc.id << ": median F=" << format_number(r.f.median) << '\n';
  return 0;
}

int cmd_test(const Common& c, int samples, int directions, int null_replicates, bool printed_q) {
  const Config cfg = load_config(c);
  CampaignConfig campaign = default_campaign(cfg.get_string("domain", "rectangle"));
  Config tuned = cfg;
  if (!cfg.contains("scenario")) tuned.set("scenario", campaign.scenario.id);
  if (!cfg.contains("n")) tuned.set("n", std::to_string(campaign.scenario.n));
  campaign.scenario = scenario_from_config(tuned);
  campaign.samples = samples;
  campaign.directions = directions;
  campaign.q_form = printed_q ? QForm::Printed : QForm::Gls;
  Config extra;
  extra.set("campaign.samples", std::to_string(samples));
  extra.set("campaign.directions", std::to_string(directions));
  extra.set("campaign.null_replicates", std::to_string(null_replicates));
  extra.set("campaign.q_form", printed_q ? "printed" : "gls");
  Output out(c.out, effective_config(campaign.scenario, extra));
  const unsigned threads = resolve_threads(c.threads);
  auto os = out.open("campaign.csv", "success rate fraction, p-value probability");
  csv_row(os, "direction", "success_rate", "mean_p_value");
  for (const auto& row : run_campaign(campaign, threads)) {
    csv_row(os, row.direction, row.success_rate, row.mean_p_value);
    std::cout << "direction " << row.direction << ": success " << format_number(row.success_rate)
              << '\n';
  }
  Output::close(os, "campaign.csv");
  if (null_replicates > 0) {
    auto ns = out.open("null.csv", "T chi-square units, p-value probability");
    csv_row(ns, "replicate", "t_value", "df", "p_value", "reject");
    const auto reports = run_null_calibration(campaign, null_replicates, threads);
    int rejected = 0;
    for (std::size_t r = 0; r < reports.size(); ++r) {
      csv_row(ns, r, reports[r].t_value, reports[r].degrees_of_freedom, reports[r].p_value,
              reports[r].reject);
      rejected += reports[r].reject;
    }
    Output::close(ns, "null.csv");
    std::cout << "null rejection rate " << format_number(double(rejected) / null_replicates) << '\n';
  }
  return 0;
}

int cmd_reproduce(const Common& c, const std::string& table) {
  const auto ids = table_ids();
  if (std::find(ids.begin(), ids.end(), table) == ids.end()) {
    throw ConfigError("unknown table '" + table + "'");
  }
  const Config cfg = load_config(c);
  const auto seed = static_cast<std::uint64_t>(cfg.get_integer("seed", 20240601));
  const auto reference = parse_spectrum_reference(cfg.get_string("spectrum", "unit"));
  Config effective;
  effective.set("table", table);
  effective.set("seed", std::to_string(seed));
  effective.set("spectrum", to_string(reference));
  effective.set("generator", kGeneratorName);
  Output out(c.out, effective);
  const auto rows = reproduce_table(table, seed, resolve_threads(c.threads), reference);
  auto os = out.open(table + ".csv", "statistic as in the published table");
  csv_row(os, "table", "scenario", "statistic", "value", "reference", "lower", "upper", "pass",
          "note");
  bool all = true;
  for (const auto& r : rows) {
    csv_row(os, r.table, '"' + r.scenario + '"', r.statistic, r.value, r.reference, r.lower,
            r.upper, r.pass, r.note);
    all = all && r.pass;
    std::cout << r.table << ' ' << r.scenario << ' ' << r.statistic << '='
              << format_number(r.value) << " (published " << format_number(r.reference) << ") "
              << (r.pass ? "in band" : "OUT OF BAND") << '\n';
  }
  Output::close(os, table + ".csv");
  for (const auto& r : rows) {
    if (!r.note.empty() && std::isnan(r.value)) throw NumericalError(r.note);
  }
  return all ? 0 : 0;
}

struct FmriSetup {
  std::vector<Event> events;
  GloverHrf hrf;
  FrameTiming timing;
  DesignOptions design;
  Config effective;
};

FmriSetup fmri_setup(const Config& cfg, const std::string& events_path) {
  FmriSetup s;
  if (events_path.empty()) {
    s.events = default_events();
  } else {
    std::ifstream is(events_path);
    if (!is) throw ConfigError("cannot open events file " + events_path);
    s.events = read_events_csv(is);
  }
  HrfSpec h;
  h.peak1 = cfg.get_double("hrf.peak1", h.peak1);
  h.fwhm1 = cfg.get_double("hrf.fwhm1", h.fwhm1);
  h.peak2 = cfg.get_double("hrf.peak2", h.peak2);
  h.fwhm2 = cfg.get_double("hrf.fwhm2", h.fwhm2);
  h.dip = cfg.get_double("hrf.dip", h.dip);
  s.hrf = GloverHrf(h);
  s.timing.repetition_time = cfg.get_double("timing.repetition_time", s.timing.repetition_time);
  s.timing.frames = static_cast<int>(cfg.get_integer("timing.frames", s.timing.frames));
  s.timing.drop_first = static_cast<int>(cfg.get_integer("timing.drop_first", s.timing.drop_first));
  s.design.step = cfg.get_double("design.step", s.design.step);
  s.design.linear_drift = cfg.get_bool("design.linear_drift", s.design.linear_drift);
  auto& e = s.effective;
  e.set("hrf.peak1", format_number(h.peak1));
  e.set("hrf.fwhm1", format_number(h.fwhm1));
  e.set("hrf.peak2", format_number(h.peak2));
  e.set("hrf.fwhm2", format_number(h.fwhm2));
  e.set("hrf.dip", format_number(h.dip));
  e.set("timing.repetition_time", format_number(s.timing.repetition_time));
  e.set("timing.frames", std::to_string(s.timing.frames));
  e.set("timing.drop_first", std::to_string(s.timing.drop_first));
  e.set("design.step", format_number(s.design.step));
  e.set("design.linear_drift", s.design.linear_drift ? "true" : "false");
  e.set("events", events_path.empty() ? "default" : events_path);
  return s;
}

int cmd_fmri_design(const Common& c, const std::string& events_path) {
  const FmriSetup s = fmri_setup(load_config(c), events_path);
  const Eigen::MatrixXd X = build_design(s.events, s.hrf, s.timing, s.design);
  Output out(c.out, s.effective);
  auto os = out.open("design.csv", "frame index, response in stimulus-height units");
  csv_row(os, "frame", "column", "value");
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index j = 0; j < X.cols(); ++j) csv_row(os, i + s.timing.drop_first, j + 1, X(i, j));
  Output::close(os, "design.csv");
  std::cout << "design: " << X.rows() << " x " << X.cols() << '\n';
  return 0;
}

int cmd_fmri_fit(const Common& c, const std::string& events_path, const std::string& volume) {
  const Config cfg = load_config(c);
  FmriSetup s = fmri_setup(cfg, events_path);
  const int nx = static_cast<int>(cfg.get_integer("slice.nx", 20));
  const int ny = static_cast<int>(cfg.get_integer("slice.ny", 20));
  const int tr1 = static_cast<int>(cfg.get_integer("slice.tr1", 4));
  const int tr2 = static_cast<int>(cfg.get_integer("slice.tr2", 4));
  SliceFitOptions options;
  options.directions = static_cast<int>(cfg.get_integer("test.directions", options.directions));
  options.alpha = cfg.get_double("test.alpha", options.alpha);
  options.seed = static_cast<std::uint64_t>(cfg.get_integer("seed", 1));
  options.empirical_eigenbasis = cfg.get_bool("fit.empirical_eigenbasis", true);
  options.contrast_columns = static_cast<int>(cfg.get_integer("test.contrast_columns", 0));
  auto& e = s.effective;
  e.set("slice.nx", std::to_string(nx));
  e.set("slice.ny", std::to_string(ny));
  e.set("slice.tr1", std::to_string(tr1));
  e.set("slice.tr2", std::to_string(tr2));
  e.set("test.directions", std::to_string(options.directions));
  e.set("test.alpha", format_number(options.alpha));
  e.set("test.contrast_columns", std::to_string(options.contrast_columns));
  e.set("fit.empirical_eigenbasis", options.empirical_eigenbasis ? "true" : "false");
  e.set("seed", std::to_string(options.seed));
  e.set("volume", volume);

  std::ifstream is(volume);
  if (!is) throw ConfigError("cannot open volume file " + volume);
  const auto slices = read_volume_csv(is, nx * ny);
  // Voxel centres on the bounding box [0, nx] x [0, ny].
  const auto basis = build_basis(Rectangle{0.0, double(nx), 0.0, double(ny)}, {1.0, 1.0},
                                 RectangleTruncation{tr1, tr2});
  const Eigen::MatrixXd X = build_design(s.events, s.hrf, s.timing, s.design);

  std::vector<int> ids;
  std::vector<const Eigen::MatrixXd*> data;
  for (const auto& [id, m] : slices) {
    ids.push_back(id);
    data.push_back(&m);
  }
  std::vector<SliceReport> reports(ids.size());
  parallel_for(ids.size(), resolve_threads(c.threads), [&](std::size_t i) {
    SliceFitOptions o = options;
    o.seed = substream_seed(options.seed, {static_cast<std::uint64_t>(ids[i])});
    reports[i] = fit_slice(X, *data[i], basis, o);
  });

  Output out(c.out, e);
  auto rs = out.open("report.csv", "F dimensionless, p-values probability");
  csv_row(rs, "slice", "frames", "f_value", "directions", "rejections", "p_value_median",
          "p_value_min", "clipped_k");
  auto ts = out.open("tests.csv", "T chi-square units, p-values probability");
  csv_row(ts, "slice", "direction", "t_value", "df", "p_value", "reject");
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& r = reports[i];
    std::vector<double> p;
    int rejections = 0;
    for (std::size_t d = 0; d < r.tests.size(); ++d) {
      const auto& t = r.tests[d];
      p.push_back(t.p_value);
      rejections += t.reject;
      csv_row(ts, ids[i], d + 1, t.t_value, t.degrees_of_freedom, t.p_value, t.reject);
    }
    std::sort(p.begin(), p.end());
    const double median = p.empty() ? 1.0
                          : p.size() % 2 ? p[p.size() / 2]
                                         : 0.5 * (p[p.size() / 2 - 1] + p[p.size() / 2]);
    csv_row(rs, ids[i], data[i]->rows(), r.fanova.f_value, r.tests.size(), rejections, median,
            p.empty() ? 1.0 : p.front(), r.covariance.clipped.size());
    std::cout << "slice " << ids[i] << ": F=" << format_number(r.fanova.f_value) << ", rejected in "
              << rejections << "/" << r.tests.size() << " directions\n";
  }
  Output::close(rs, "report.csv");
  Output::close(ts, "tests.csv");
  auto bs = out.open("beta.csv", "response units per unit regressor");
  csv_row(bs, "slice", "component", "k", "value");
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& b = reports[i].fit.beta_coefficients;
    for (Eigen::Index sidx = 0; sidx < b.cols(); ++sidx)
      for (Eigen::Index k = 0; k < b.rows(); ++k) csv_row(bs, ids[i], sidx + 1, k + 1, b(k, sidx));
  }
  Output::close(bs, "beta.csv");
  return 0;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "INI run configuration");
  sub->add_option("--set", c.overrides, "override a config key (key=value), repeatable");
  sub->add_option("--seed", c.seed, "master seed");
  sub->add_option("--threads", c.threads, "worker threads, 0 = all cores");
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--pd-floor", c.pd_floor, "lift Lambda_k eigenvalues below eps*trace/n");
  sub->add_option("--truncation-mode", c.truncation_mode, "default or global")
      ->check(CLI::IsMember({"default", "global"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Functional ANOVA with ARH(1) errors on Dirichlet eigenbases"};
  app.require_subcommand(1);
  Common common;
  std::string table;
  std::string events_path;
  std::string volume;
  int samples = 150, directions = 8, null_replicates = 0;
  bool printed_q = false;

  auto* basis = app.add_subcommand("basis", "export eigenpairs and the quadrature grid");
  auto* simulate = app.add_subcommand("simulate", "draw one response sample");
  auto* fitc = app.add_subcommand("fit", "Monte Carlo GLS fit with EFMSE");
  auto* fanova = app.add_subcommand("fanova", "Monte Carlo FANOVA F statistics");
  auto* test = app.add_subcommand("test", "projected test campaign");
  auto* reproduce = app.add_subcommand("reproduce", "rerun one published table");
  auto* design = app.add_subcommand("fmri-design", "export the hrf-convolved design");
  auto* fmri = app.add_subcommand("fmri-fit", "fit every slice of a volume");
  for (auto* sub : {basis, simulate, fitc, fanova, test, reproduce, design, fmri}) add_common(sub, common);
  test->add_option("--samples", samples, "samples per direction");
  test->add_option("--directions", directions, "random directions");
  test->add_option("--null-replicates", null_replicates, "null calibration replicates");
  test->add_flag("--printed-q", printed_q, "use (X^T Lambda_h X)^-1 for Q");
  reproduce->add_option("table", table, "table id")->required();
  for (auto* sub : {design, fmri}) sub->add_option("--events", events_path, "events CSV");
  fmri->add_option("--volume", volume, "volume CSV (slice,frame,node,value)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*basis) return cmd_basis(common);
    if (*simulate) return cmd_simulate(common);
    if (*fitc) return cmd_fit(common, false);
    if (*fanova) return cmd_fit(common, true);
    if (*test) return cmd_test(common, samples, directions, null_replicates, printed_q);
    if (*reproduce) return cmd_reproduce(common, table);
    if (*design) return cmd_fmri_design(common, events_path);
    if (*fmri) return cmd_fmri_fit(common, events_path, volume);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
