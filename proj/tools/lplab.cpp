#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lplab/constants.hpp"
#include "lplab/experiment.hpp"
#include "lplab/io.hpp"

using namespace lplab;
using nlohmann::json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
}

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  const ExperimentConfig config = parse_config(read_json(config_path));
  const Report report = run_experiment(config);
  emit_report(report, out_dir);
  std::cout << report.scenario << ": " << (report.pass ? "PASS" : "FAIL") << " (" << report.criterion << ")\n"
            << "  rows " << report.rows.size() << ", ratio range [" << report.min_ratio << ", " << report.max_ratio
            << "], spread " << report.spread << "\n";
  return report.pass ? 0 : kExitFail;
}

int cmd_kernels_list() {
  for (const auto& k : builtin_catalog()) {
    std::cout << k.name << "  [";
    for (std::size_t i = 0; i < k.default_params.size(); ++i) std::cout << (i ? ", " : "") << k.default_params[i];
    std::cout << "]  " << k.description << "\n";
  }
  return 0;
}

int cmd_calderon(const std::string& kernel, const std::vector<double>& params, double b, int dimension,
                 const std::string& out_dir) {
  const KernelFamily family{make_builtin(kernel, params)};
  const IntervalCover cover =
      find_intervals(family, dimension, dimension == 1 ? 2 : 16, ScaleGrid::log_uniform(1e-4, 1e4, 801));
  const double base = b > 0.0 ? b : cover.b0;
  const PartitionSystem P = PartitionSystem::build(family, dimension, base, cover);

  double residual = 0.0;
  for (const Point& xi : sample_frequencies(dimension, dimension == 1 ? 2 : 16, 1e-3, 1e3, 2000)) {
    residual = std::max(residual, std::abs(P.reproducing_sum(xi) - 1.0));
  }
  json intervals = json::array();
  for (const auto& I : P.intervals()) intervals.push_back({I.lo, I.hi});
  const json report{{"kernel", kernel}, {"b", P.b()},         {"b0", P.b0()},
                    {"r1", P.r1()},     {"r2", P.r2()},       {"threshold", cover.threshold},
                    {"infimum", cover.infimum}, {"intervals", intervals}, {"reproduction_residual", residual}};
  std::cout << report.dump(2) << "\n";
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text(out_dir + "/calderon.json", report.dump(2) + "\n");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < 512; ++i) {
      const double r = 0.5 * P.r1() * std::pow(4.0 * P.r2() / P.r1(), static_cast<double>(i) / 511.0);
      const Complex e = P.eta({r, 0.0});
      rows.push_back({r, e.real(), e.imag(), P.normalizer({r, 0.0})});
    }
    write_csv(out_dir + "/eta_ray.csv", {"radius", "eta_re", "eta_im", "normalizer"}, rows);
  }
  return residual <= 1e-10 ? 0 : kExitFail;
}

int cmd_constants(const std::string& phi_name, const std::string& psi_name, double N, double L, double b, double A,
                  const std::string& theta_kind, const std::string& out_dir) {
  const KernelSpec phi = make_builtin(phi_name);
  const KernelSpec psi = make_builtin(psi_name);
  ThetaConfig theta_cfg;
  theta_cfg.kind = theta_kind;
  const KernelSpec theta = theta_cfg.build();
  const KernelFamily family{phi};
  const IntervalCover cover = find_intervals(family, 1, 2, ScaleGrid::log_uniform(1e-4, 1e4, 801));
  const PartitionSystem P = PartitionSystem::build(family, 1, b, cover);
  const ConstantsReport report = check_conditions(P, phi, psi, theta, A, N);

  json verdicts = json::object();
  bool all = true;
  for (const auto& [name, v] : report.verdicts) {
    verdicts[name] = {{"pass", v.pass}, {"measured", std::isfinite(v.measured) ? json(v.measured) : json("inf")},
                      {"detail", v.detail}};
    all = all && v.pass;
  }
  const json out{{"phi", phi_name},          {"psi", psi_name},
                 {"N", N},                   {"b", b},
                 {"A", A},                   {"tau_fit", report.tau_fit},
                 {"D_value", report.D_value}, {"gradient_D_value", report.gradient_D_value},
                 {"verdicts", verdicts}};
  std::cout << out.dump(2) << "\n";

  const ConstantsEvaluator eval(P);
  std::vector<std::vector<double>> rows;
  for (long j = first_index_below(b, A); j <= report.j_max; ++j) {
    try {
      rows.push_back({static_cast<double>(j), eval.c_const(psi, j, L).value});
    } catch (const Error&) {
      break;
    }
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text(out_dir + "/constants.json", out.dump(2) + "\n");
    write_csv(out_dir + "/C_values.csv", {"j", "C"}, rows);
  } else {
    std::cout << "j,C\n";
    for (const auto& r : rows) std::cout << r[0] << "," << r[1] << "\n";
  }
  return all ? 0 : kExitFail;
}

int cmd_maximal(const std::string& op, const std::string& in, const std::string& out, const std::string& csv,
                double N, double R) {
  const SampledField f = read_field(in);
  SampledField result(f.grid());
  if (op == "peetre") {
    result = peetre_max(f, {N, R});
  } else if (op == "hl") {
    result = hl_max(f);
  } else if (op == "grand") {
    result = grand_max(f, GrandMaxConfig::default_for(f.grid()));
  } else {
    throw ConfigError("unknown maximal operator '" + op + "'");
  }
  write_field(out, result);
  if (!csv.empty()) write_field_csv(csv, result);
  return 0;
}

int cmd_transform_g(const std::string& kernel, double q, const std::string& in, const std::string& out,
                    const std::string& csv, std::size_t count) {
  const SampledField f = read_field(in);
  const SampledField g = g_function(f, make_builtin(kernel), ScaleGrid::default_for(f.grid(), count), q);
  write_field(out, g);
  if (!csv.empty()) write_field_csv(csv, g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lplab: numerical Littlewood-Paley laboratory"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment config and write report.json, ratios.csv, plotdata/");
  std::string config_path, out_dir = "out";
  run->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory");

  auto* kernels = app.add_subcommand("kernels", "Kernel catalog");
  kernels->add_subcommand("list", "List builtin kernels");
  kernels->require_subcommand(1);

  auto* calderon = app.add_subcommand("calderon", "Calderon partition tools");
  auto* build = calderon->add_subcommand("build", "Build the reproducing partition for one kernel");
  calderon->require_subcommand(1);
  std::string cal_kernel = "poissonQ", cal_out;
  std::vector<double> cal_params;
  double cal_b = 0.0;
  int cal_dim = 1;
  build->add_option("--kernel", cal_kernel, "Builtin kernel name");
  build->add_option("--params", cal_params, "Kernel parameters");
  build->add_option("--b", cal_b, "Base b in [b0, 1); defaults to b0");
  build->add_option("--dim", cal_dim, "Dimension (1 or 2)")->check(CLI::Range(1, 2));
  build->add_option("--out", cal_out, "Directory for calderon.json and eta_ray.csv");

  auto* constants = app.add_subcommand("constants", "Constants C, D and condition verdicts");
  auto* creport = constants->add_subcommand("report", "Check the growth, decay and remainder conditions");
  constants->require_subcommand(1);
  std::string c_phi = "poissonQ", c_psi = "annulus_bump", c_theta = "zero", c_out;
  double c_N = 2.0, c_L = 2.0, c_b = 0.5, c_A = 1.0;
  creport->add_option("--phi", c_phi, "Kernel phi");
  creport->add_option("--psi", c_psi, "Kernel psi");
  creport->add_option("--theta", c_theta, "Theta multiplier: zero, constant or xi");
  creport->add_option("--N", c_N, "N (conditions use L = N)");
  creport->add_option("--L", c_L, "L for the C(psi, j, L) table");
  creport->add_option("--b", c_b, "Base b");
  creport->add_option("--A", c_A, "A >= 1");
  creport->add_option("--out", c_out, "Directory for constants.json and C_values.csv");

  auto* maximal = app.add_subcommand("maximal", "Apply a maximal operator to a field file");
  std::string m_op, m_in, m_out, m_csv;
  double m_N = 2.0, m_R = 1.0;
  maximal->add_option("--op", m_op, "peetre, hl or grand")->required()->check(CLI::IsMember({"peetre", "hl", "grand"}));
  maximal->add_option("--in", m_in, "Input field")->required()->check(CLI::ExistingFile);
  maximal->add_option("--out", m_out, "Output field")->required();
  maximal->add_option("--csv", m_csv, "Also dump the result as CSV");
  maximal->add_option("--N", m_N, "Peetre exponent N");
  maximal->add_option("--R", m_R, "Peetre radius R");

  auto* transform = app.add_subcommand("transform", "Square functions");
  auto* tg = transform->add_subcommand("g", "Littlewood-Paley g-function of a field file");
  transform->require_subcommand(1);
  std::string t_kernel = "poissonQ", t_in, t_out, t_csv;
  double t_q = 2.0;
  std::size_t t_count = 128;
  tg->add_option("--kernel", t_kernel, "Builtin kernel name");
  tg->add_option("--q", t_q, "Exponent q");
  tg->add_option("--scales", t_count, "Number of scales");
  tg->add_option("--in", t_in, "Input field")->required()->check(CLI::ExistingFile);
  tg->add_option("--out", t_out, "Output field")->required();
  tg->add_option("--csv", t_csv, "Also dump the result as CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir);
    if (kernels->parsed()) return cmd_kernels_list();
    if (build->parsed()) return cmd_calderon(cal_kernel, cal_params, cal_b, cal_dim, cal_out);
    if (creport->parsed()) return cmd_constants(c_phi, c_psi, c_N, c_L, c_b, c_A, c_theta, c_out);
    if (maximal->parsed()) return cmd_maximal(m_op, m_in, m_out, m_csv, m_N, m_R);
    if (tg->parsed()) return cmd_transform_g(t_kernel, t_q, t_in, t_out, t_csv, t_count);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return 0;
}
