#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "hfanova/config.hpp"
#include "hfanova/covariance_model.hpp"
#include "hfanova/cramer_wold.hpp"
#include "hfanova/domain.hpp"
#include "hfanova/fanova.hpp"
#include "hfanova/gaussian_simulation.hpp"
#include "hfanova/spectral_basis.hpp"

namespace hfanova {

/// Which Laplacian spectrum feeds the covariance power law. Physical uses the
/// eigenvalues of the domain as given; Unit rescales the domain to unit size
/// (rectangle side sqrt(l1 l2), disk and sector radius 1).
enum class SpectrumReference { Physical, Unit };

std::string to_string(SpectrumReference reference);
SpectrumReference parse_spectrum_reference(const std::string& text);
double reference_scale(const Domain& domain, SpectrumReference reference);

struct ScenarioConfig {
  std::string id = "P1,a,C1";
  Domain domain = Rectangle{-2.0, 3.0, -2.0, 3.0};
  GridSteps steps{0.05, 0.05};
  TruncationSpec truncation = RectangleTruncation{4, 4};
  int n = 200;
  int p = 4;
  int replicates = 20;
  BetaShape shape = BetaShape::RectC1;
  Eigen::VectorXd gamma;  // empty: default profile for n
  std::uint64_t seed = 20240601;
  double alpha = 0.05;
  SpectrumReference reference = SpectrumReference::Unit;
  double pd_floor = 0.0;  // 0 disables the floor
  bool grid_metrics = false;  // accumulate L-infinity fields on the grid
};

/// Rows of the scenario tables for "rectangle", "disk" or "sector".
std::vector<ScenarioConfig> published_scenarios(const std::string& domain);
ScenarioConfig find_scenario(const std::string& domain, const std::string& id);
int truncation_order(const ScenarioConfig& config);

/// Overrides a scenario from config keys (domain geometry, n, p, seed, ...).
ScenarioConfig scenario_from_config(const Config& config);
void write_scenario_config(std::ostream& os, const ScenarioConfig& config);

/// Everything fixed across replicates.
struct ScenarioSetup {
  SpectralBasis basis;
  LambdaSequence lambdas;
  BetaTruth beta;
  Eigen::MatrixXd X;
};

ScenarioSetup prepare(const ScenarioConfig& config);

struct ScenarioResult {
  std::string id;
  double efmse_beta = 0.0;
  double efmse_y = 0.0;
  std::vector<FanovaResult> fanova;
  FSummary f;
  std::vector<Eigen::MatrixXd> beta_hat;  // per replicate, TR x p
  Eigen::VectorXd linf_beta;              // grid_metrics only
  Eigen::VectorXd linf_y;                 // grid_metrics only
};

ScenarioResult run_scenario(const ScenarioSetup& setup, const ScenarioConfig& config,
                            unsigned threads = 1);
ScenarioResult run_scenario(const ScenarioConfig& config, unsigned threads = 1);

/// One replicate's response coefficients (n x TR).
Eigen::MatrixXd simulate_response(const ScenarioSetup& setup, std::uint64_t seed);

struct CampaignConfig {
  ScenarioConfig scenario;
  int samples = 150;
  int directions = 8;
  bool null_truth = false;  // every beta component equal to the first
  QForm q_form = QForm::Gls;
};

/// Campaign defaults: C1, p = 4, n = 150 on the given domain.
CampaignConfig default_campaign(const std::string& domain);

/// The same samples are tested along every direction.
std::vector<CampaignRow> run_campaign(const CampaignConfig& config, unsigned threads = 1);

/// Null truth, a fresh direction and sample per replicate; returns every report.
std::vector<TestReport> run_null_calibration(const CampaignConfig& config, int replicates,
                                             unsigned threads = 1);

struct TableRow {
  std::string table;
  std::string scenario;
  std::string statistic;
  double value = 0.0;
  double reference = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool pass = false;
  std::string note;
};

std::vector<std::string> table_ids();
/// Runs every scenario of the table and compares against the published value.
std::vector<TableRow> reproduce_table(const std::string& table, std::uint64_t seed,
                                      unsigned threads = 1,
                                      SpectrumReference reference = SpectrumReference::Unit);

}  // namespace hfanova
