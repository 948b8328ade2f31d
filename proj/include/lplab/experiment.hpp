#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "lplab/weights.hpp"
#include "lplab/transforms.hpp"

namespace lplab {

/// Invalid or inadmissible experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// {"name", "params", "derivative_axis", "dilation"}
struct KernelConfig {
  std::string name = "poissonQ";
  std::vector<double> params;
  std::optional<int> derivative_axis;
  double dilation = 1.0;

  KernelSpec build() const;
};

/// {"kind": "zero" | "constant" | "xi", "c", "axis"}
struct ThetaConfig {
  std::string kind = "zero";
  double c = 1.0;
  int axis = 0;

  KernelSpec build() const;
};

/// {"kind": "constant" | "power", "c", "a"}
struct WeightConfig {
  std::string kind = "constant";
  double c = 1.0;
  double a = 0.0;

  Weight build() const;
};

struct GridConfig {
  int dimension = 1;
  std::size_t points = 4096;
  double half_extent = 32.0;

  Grid build() const;
};

/// Geometric scale grid from t_max down to t_min with constant ratio.
struct ScaleConfig {
  double t_max = 256.0;
  double t_min = 1.0 / 65536.0;
  double ratio = 0.917004043204671;  // 2^(-1/8)

  ScaleGrid build() const;
};

struct FamilyConfig {
  /// gaussian_derivative, modulated_gaussian, bandlimited_noise.
  std::vector<std::string> shapes{"gaussian_derivative", "modulated_gaussian", "bandlimited_noise"};
  std::vector<double> dilations{0.25, 0.5, 1.0, 2.0, 4.0};
  std::vector<double> translates{0.0};
  std::uint64_t seed = 1;
};

enum class Scenario { prop23, thm210, cor31, prop36, lemma33, constants_audit };

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& s);

struct ExperimentConfig {
  Scenario scenario = Scenario::cor31;
  KernelConfig phi;
  KernelConfig psi{"annulus_bump", {}, std::nullopt, 1.0};
  ThetaConfig theta;
  double p = 1.0;
  double q = 2.0;
  double N = 2.0;
  double A = 1.0;
  double b = 0.5;
  WeightConfig weight;
  GridConfig grid;
  ScaleConfig scales;
  FamilyConfig family;

  /// Largest admissible max/min ratio over the family (prop23, thm210, cor31).
  double max_spread = 0.0;
  /// Per-function dilation deviation bound |ratio_lambda / ratio_1 - 1|.
  double dilation_tolerance = 0.02;
  /// Relative bound: multiplier oracle (thm210/prop23 at q = 2, constant
  /// weight), Riemann-sum difference (prop36).
  double tolerance = 0.02;

  /// lemma33 only.
  std::vector<double> epsilons{1e-1, 1e-2, 1e-3};
  int atoms = 20;
  double atom_side = 1.0;
  double atom_spread = 1.5;

  /// constants_audit only.
  long j_max = 40;

  /// Throws ConfigError when a scenario hypothesis fails.
  void validate() const;
};

ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

struct TestFunction {
  std::string name;
  std::string shape;
  double lambda = 1.0;
  double translate = 0.0;
  SampledField values;
};

/// shape(lambda (x - translate)) sampled spectrally.
SampledField make_test_function(const std::string& shape, const Grid& grid, double lambda, double translate,
                                std::uint64_t seed);

/// shapes x dilations x translates, in that nesting order.
std::vector<TestFunction> make_family(const FamilyConfig& family, const Grid& grid);

struct ReportRow {
  std::string fname;
  double lambda = 1.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::optional<double> oracle;

  bool operator==(const ReportRow&) const = default;
};

struct Report {
  std::string scenario;
  bool pass = false;
  /// The acceptance bound that decided `pass`.
  std::string criterion;
  std::vector<ReportRow> rows;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double spread = 0.0;
  /// Invariance checks and scenario-specific measurements.
  std::map<std::string, double> diagnostics;
  std::vector<std::string> notes;
  /// Grid, scales, seed and the echoed configuration.
  nlohmann::json environment;

  bool operator==(const Report& other) const;
};

nlohmann::json report_to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);

Report run_experiment(const ExperimentConfig& config);

/// Writes report.json, ratios.csv (fname,lambda,lhs,rhs,ratio) and
/// plotdata/<fname>.csv (lambda,ratio) into `directory`.
void emit_report(const Report& r, const std::string& directory);

/// Scale grid with ratio 2^(-1/8) from half_extent down to spacing/2, closed
/// under dilation by powers of two away from its ends.
ScaleGrid dyadic_grand_max_scales(const Grid& grid);

}  // namespace lplab
