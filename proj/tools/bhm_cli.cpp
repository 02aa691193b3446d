// Command-line front end: grid inspection, Bessel calculus, maximal
// operators, norms, atomic decomposition and the verification suite, all
// over the BHG1 grid-function format.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bhm/io.hpp"
#include "bhm/verify.hpp"

namespace fs = std::filesystem;
using namespace bhm;

namespace {

std::pair<int, int> parse_range(const std::string& s, const char* what) {
  auto pos = s.find(':');
  if (pos == std::string::npos)
    throw CLI::ValidationError(std::string(what) + ": expected lo:hi, got " + s);
  return {std::stoi(s.substr(0, pos)), std::stoi(s.substr(pos + 1))};
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

ExperimentConfig load_config(const std::string& path) {
  if (path == "default") return ExperimentConfig{};
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot open config " + path);
  nlohmann::json j;
  in >> j;
  return ExperimentConfig::from_json(j);
}

nlohmann::json cube_json(const DyadicCube& c) {
  nlohmann::json j;
  j["j"] = c.level;
  j["k"] = c.index;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"half-space Bessel harmonic analysis toolkit"};
  app.require_subcommand(1);

  // grid info <path>
  auto* grid_cmd = app.add_subcommand("grid", "grid-function file utilities");
  grid_cmd->require_subcommand(1);
  std::string info_path;
  auto* info_cmd = grid_cmd->add_subcommand("info", "print the BHG1 header");
  info_cmd->add_option("path", info_path, "grid-function file")->required();

  // bessel shift|convolve|poisson
  auto* bessel_cmd = app.add_subcommand("bessel", "shift, convolution, Poisson");
  bessel_cmd->require_subcommand(1);
  std::string b_in, b_in2, b_out, b_shift;
  double b_scale = 1.0, b_nu = -1.0;
  int b_nodes = kDefaultShiftNodes;
  auto* shift_cmd = bessel_cmd->add_subcommand("shift", "generalized translation");
  shift_cmd->add_option("--in", b_in)->required();
  shift_cmd->add_option("--out", b_out)->required();
  shift_cmd->add_option("--y", b_shift, "shift vector y1,y2,...")->required();
  shift_cmd->add_option("--nu", b_nu, "consistency check against the file");
  shift_cmd->add_option("--quad-nodes", b_nodes);
  auto* conv_cmd = bessel_cmd->add_subcommand("convolve", "weighted convolution");
  conv_cmd->add_option("--in", b_in)->required();
  conv_cmd->add_option("--with", b_in2, "second factor")->required();
  conv_cmd->add_option("--out", b_out)->required();
  conv_cmd->add_option("--nu", b_nu);
  conv_cmd->add_option("--quad-nodes", b_nodes);
  auto* pois_cmd = bessel_cmd->add_subcommand("poisson", "Poisson smoothing");
  pois_cmd->add_option("--in", b_in)->required();
  pois_cmd->add_option("--out", b_out)->required();
  pois_cmd->add_option("--scale", b_scale, "Poisson parameter t")->required();
  pois_cmd->add_option("--nu", b_nu);
  pois_cmd->add_option("--quad-nodes", b_nodes);

  // maximal
  auto* max_cmd = app.add_subcommand("maximal", "maximal operators");
  std::string m_kind, m_in, m_out, m_scales = "0:3";
  double m_lambda = 2.0, m_nu = -1.0, m_aperture = 1.0;
  int m_N = 2, m_family = 3, m_nodes = kDefaultShiftNodes;
  max_cmd
      ->add_option("--kind", m_kind,
                   "hl|radial|nontangential|tangential|grand|poisson")
      ->required();
  max_cmd->add_option("--in", m_in)->required();
  max_cmd->add_option("--out", m_out)->required();
  max_cmd->add_option("--scales", m_scales, "dyadic exponent range m_min:m_max");
  max_cmd->add_option("--lambda", m_lambda);
  max_cmd->add_option("--N", m_N);
  max_cmd->add_option("--nu", m_nu);
  max_cmd->add_option("--aperture", m_aperture);
  max_cmd->add_option("--family-size", m_family);
  max_cmd->add_option("--quad-nodes", m_nodes);

  // norm
  auto* norm_cmd = app.add_subcommand("norm", "weighted norms");
  std::string n_space, n_in, n_via = "grand";
  double n_p = 1.0, n_q = 1.0, n_nu = -1.0;
  std::string n_scales = "0:3";
  int n_N = 2, n_family = 3, n_nodes = kDefaultShiftNodes;
  norm_cmd->add_option("--space", n_space, "lp|morrey|hardy-morrey")->required();
  norm_cmd->add_option("--in", n_in)->required();
  norm_cmd->add_option("--p", n_p)->required();
  norm_cmd->add_option("--q", n_q);
  norm_cmd->add_option("--nu", n_nu);
  norm_cmd->add_option("--via", n_via, "radial|grand|poisson");
  norm_cmd->add_option("--scales", n_scales);
  norm_cmd->add_option("--N", n_N);
  norm_cmd->add_option("--family-size", n_family);
  norm_cmd->add_option("--quad-nodes", n_nodes);

  // decompose
  auto* dec_cmd = app.add_subcommand("decompose", "atomic decomposition");
  std::string d_in, d_out_dir, d_s = "auto", d_levels, d_scales = "0:3";
  double d_p = 1.0, d_q = 1.0, d_nu = -1.0;
  int d_N = 2, d_family = 3, d_nodes = kDefaultShiftNodes;
  dec_cmd->add_option("--in", d_in)->required();
  dec_cmd->add_option("--out-dir", d_out_dir)->required();
  dec_cmd->add_option("--p", d_p)->required();
  dec_cmd->add_option("--q", d_q)->required();
  dec_cmd->add_option("--s", d_s, "moment degree, or 'auto'");
  dec_cmd->add_option("--levels", d_levels, "threshold range j_min:j_max");
  dec_cmd->add_option("--nu", d_nu);
  dec_cmd->add_option("--scales", d_scales);
  dec_cmd->add_option("--N", d_N);
  dec_cmd->add_option("--family-size", d_family);
  dec_cmd->add_option("--quad-nodes", d_nodes);

  // verify / sweep
  auto* ver_cmd = app.add_subcommand("verify", "run the verification suite");
  std::string v_config, v_out_dir;
  ver_cmd->add_option("--config", v_config, "config JSON path, or 'default'")
      ->required();
  ver_cmd->add_option("--out-dir", v_out_dir, "also write report.json/.csv");
  auto* sw_cmd = app.add_subcommand("sweep", "parameter sweep, CSV output");
  std::string s_config, s_axis, s_values;
  sw_cmd->add_option("--config", s_config)->required();
  sw_cmd->add_option("--axis", s_axis, "h|levels|family_size|lambda")->required();
  sw_cmd->add_option("--values", s_values, "comma-separated list")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (info_cmd->parsed()) {
      GridFunction f = load_grid_function(info_path);
      const HalfSpaceGrid& g = f.grid;
      std::printf("BHG1 n=%d h=%.17g L=%d nu=%.17g count=%lld\n", g.dim, g.h,
                  g.box_level, g.nu,
                  static_cast<long long>(g.total_cells()));
      return 0;
    }

    if (shift_cmd->parsed() || conv_cmd->parsed() || pois_cmd->parsed()) {
      GridFunction f = load_grid_function(b_in);
      if (b_nu >= 0.0 && b_nu != f.grid.nu)
        throw std::invalid_argument("--nu does not match the input file");
      GridFunction out(f.grid);
      if (shift_cmd->parsed()) {
        out = bessel_shift(f, parse_doubles(b_shift), b_nodes);
      } else if (conv_cmd->parsed()) {
        GridFunction g2 = load_grid_function(b_in2);
        out = bessel_convolve(f, g2, b_nodes);
      } else {
        GridFunction pk = poisson_kernel(b_scale, f.grid);
        out = bessel_convolve(pk, f, b_nodes);
      }
      store_grid_function(out, b_out);
      return 0;
    }

    if (max_cmd->parsed()) {
      GridFunction f = load_grid_function(m_in);
      if (m_nu >= 0.0 && m_nu != f.grid.nu)
        throw std::invalid_argument("--nu does not match the input file");
      auto [lo, hi] = parse_range(m_scales, "--scales");
      MaximalSpec spec;
      spec.kind = maximal_kind_from_string(m_kind);
      spec.scales = ScaleSet::dyadic(lo, hi);
      spec.lambda = m_lambda;
      spec.N = m_N;
      spec.aperture = m_aperture;
      spec.quad_nodes = m_nodes;
      spec.phi = normalize_for_family(default_mollifier(f.grid), m_N);
      spec.family = grand_family(m_N, m_family, f.grid);
      spec.family.push_back(*spec.phi);
      store_grid_function(apply_maximal(f, spec), m_out);
      return 0;
    }

    if (norm_cmd->parsed()) {
      GridFunction f = load_grid_function(n_in);
      double nu = n_nu >= 0.0 ? n_nu : f.grid.nu;
      double value = 0.0;
      nlohmann::json out;
      if (n_space == "lp") {
        value = lebesgue_norm(f, n_p, nu);
      } else if (n_space == "morrey") {
        value = morrey_norm(f, NormParams(n_p, n_q, nu));
      } else if (n_space == "hardy-morrey") {
        auto [lo, hi] = parse_range(n_scales, "--scales");
        MaximalSpec spec;
        spec.kind = maximal_kind_from_string(n_via);
        spec.scales = ScaleSet::dyadic(lo, hi);
        spec.N = n_N;
        spec.quad_nodes = n_nodes;
        spec.phi = normalize_for_family(default_mollifier(f.grid), n_N);
        spec.family = grand_family(n_N, n_family, f.grid);
        spec.family.push_back(*spec.phi);
        value = hardy_morrey_norm(f, NormParams(n_p, n_q, nu), spec);
        out["via"] = n_via;
      } else {
        throw std::invalid_argument("unknown space " + n_space);
      }
      out["space"] = n_space;
      out["params"] = {{"p", n_p}, {"q", n_q}, {"nu", nu}};
      out["value"] = value;
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (dec_cmd->parsed()) {
      GridFunction f = load_grid_function(d_in);
      double nu = d_nu >= 0.0 ? d_nu : f.grid.nu;
      if (nu != f.grid.nu)
        throw std::invalid_argument("--nu does not match the input file");
      NormParams params(d_p, d_q, nu);
      int s = d_s == "auto" ? -1 : std::stoi(d_s);
      auto [slo, shi] = parse_range(d_scales, "--scales");
      std::vector<TestFunction> family = grand_family(d_N, d_family, f.grid);
      family.push_back(normalize_for_family(default_mollifier(f.grid), d_N));
      GridFunction mf = grand_maximal(f, d_N, family,
                                      ScaleSet::dyadic(slo, shi), d_nodes);
      int j_min, j_max;
      if (!d_levels.empty()) {
        std::tie(j_min, j_max) = parse_range(d_levels, "--levels");
      } else {
        if (mf.max_abs() == 0.0)
          throw std::invalid_argument("input is zero: nothing to decompose");
        j_max = static_cast<int>(std::floor(std::log2(mf.max_abs())));
        j_min = j_max - 3;
      }
      Decomposition dec = atomic_decompose(f, params, s, j_min, j_max, mf);

      fs::create_directories(d_out_dir);
      nlohmann::json manifest;
      manifest["atoms"] = nlohmann::json::array();
      for (std::size_t a = 0; a < dec.atoms.size(); ++a) {
        char name[32];
        std::snprintf(name, sizeof(name), "atom_%04zu.bhg", a);
        store_grid_function(dec.atoms[a].values,
                            (fs::path(d_out_dir) / name).string());
        nlohmann::json rec;
        rec["file"] = name;
        rec["cube"] = cube_json(dec.atoms[a].cube);
        rec["lambda"] = dec.coefficients.entries[a].lambda;
        rec["level_j"] = dec.atoms[a].level_j;
        manifest["atoms"].push_back(rec);
      }
      store_grid_function(dec.residual,
                          (fs::path(d_out_dir) / "residual.bhg").string());
      manifest["residual_file"] = "residual.bhg";
      manifest["empirical_C"] = dec.empirical_C;
      manifest["norms"] = {
          {"coefficient", coefficient_norm(dec.coefficients, params, f.grid)},
          {"hardy_morrey", morrey_norm(mf, params)},
          {"residual_l2", lebesgue_norm(dec.residual, 2.0, nu)},
          {"f_l2", lebesgue_norm(f, 2.0, nu)}};
      manifest["levels"] = {{"j_min", j_min}, {"j_max", j_max}};
      manifest["warnings"] = dec.warnings;
      std::ofstream mout(fs::path(d_out_dir) / "manifest.json");
      mout << manifest.dump(2) << "\n";
      return 0;
    }

    if (ver_cmd->parsed()) {
      ExperimentConfig cfg = load_config(v_config);
      VerificationReport rep = run_verification_suite(cfg);
      std::cout << rep.to_json().dump(2) << "\n";
      if (!v_out_dir.empty()) {
        fs::create_directories(v_out_dir);
        std::ofstream j(fs::path(v_out_dir) / "report.json");
        j << rep.to_json().dump(2) << "\n";
        std::ofstream c(fs::path(v_out_dir) / "report.csv");
        c << rep.csv();
      }
      return rep.all_hard_pass() ? 0 : 1;
    }

    if (sw_cmd->parsed()) {
      ExperimentConfig cfg = load_config(s_config);
      std::cout << sweep(cfg, s_axis, parse_doubles(s_values));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
