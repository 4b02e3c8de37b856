#include "cliffop/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <stdexcept>

#include "cliffop/gross_pitaevskii.hpp"
#include "cliffop/hash.hpp"
#include "cliffop/integral_ops.hpp"
#include "cliffop/io.hpp"
#include "cliffop/miura.hpp"
#include "cliffop/parallel.hpp"
#include "cliffop/stencil_ops.hpp"

namespace cliffop {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Validation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return dir + "/" + name;
}

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) std::filesystem::create_directories(dir);
}

void write_manifest(const std::string& dir, const json& cfg,
                    const std::string& command, std::uint64_t seed,
                    RunResult& res) {
  json m;
  m["command"] = command;
  m["config_hash"] = fnv1a64_hex(cfg.dump());
  m["seed"] = seed;
  m["tool_version"] = kToolVersion;
  json names = json::array();  // directory-independent, keeps reruns identical
  for (const auto& p : res.outputs)
    names.push_back(std::filesystem::path(p).filename().string());
  m["outputs"] = names;
  std::string path = join_path(dir, "manifest.json");
  write_text_file(path, m.dump(2) + "\n");
  res.outputs.push_back(path);
}

GridSpec grid_from_config(const json& cfg) {
  if (!cfg.contains("grid")) throw Validation("config: missing \"grid\"");
  return gridspec_from_json(cfg.at("grid"));
}

std::uint64_t seed_from_config(const json& cfg) {
  return cfg.value("seed", std::uint64_t(0));
}

// ---- manufactured families ----------------------------------------------

double family_phi_value(const std::string& family, double c,
                        const std::array<double, 4>& x, int n) {
  if (family == "exp-bilinear") return std::exp(c * x[0] * x[1]);
  if (family == "exp-linear") return std::exp(c * x[0]);
  if (family == "gaussian") {
    double x2 = 0.0;
    for (int a = 0; a < n; ++a) x2 += x[a] * x[a];
    return std::exp(-c * x2);
  }
  if (family == "sine") return 1.0 + c * std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
  throw Validation("unknown manufactured family: " + family);
}

double family_potential_value(const std::string& family, double c,
                              const std::array<double, 4>& x, int n) {
  // V = -(Delta phi)/phi, analytically
  if (family == "exp-bilinear") return -c * c * (x[0] * x[0] + x[1] * x[1]);
  if (family == "exp-linear") return -c * c;
  if (family == "gaussian") {
    double x2 = 0.0;
    for (int a = 0; a < n; ++a) x2 += x[a] * x[a];
    return 2.0 * c * n - 4.0 * c * c * x2;
  }
  if (family == "sine") {
    double s = std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
    return 2.0 * kPi * kPi * c * s / (1.0 + c * s);
  }
  throw Validation("unknown manufactured family: " + family);
}

}  // namespace

CliffordField manufactured_phi(const std::string& family, double coeff,
                               const GridSpec& g) {
  return sample_scalar(g, g.n, [&](const std::array<double, 4>& x) {
    return family_phi_value(family, coeff, x, g.n);
  });
}

CliffordField manufactured_potential(const std::string& family, double coeff,
                                     const GridSpec& g) {
  return sample_scalar(g, g.n, [&](const std::array<double, 4>& x) {
    return family_potential_value(family, coeff, x, g.n);
  });
}

namespace {

CliffordField potential_from_config(const json& cfg, const GridSpec& g) {
  if (!cfg.contains("potential")) return CliffordField(g, g.n, false);
  const json& p = cfg.at("potential");
  std::string kind = p.value("kind", "zero");
  if (kind == "zero") return CliffordField(g, g.n, false);
  if (kind == "manufactured")
    return manufactured_potential(p.value("family", "exp-bilinear"),
                                  p.value("coeff", 0.1), g);
  if (kind == "sampled") {
    CliffordField f = read_field_csv(p.at("file").get<std::string>());
    if (!(f.grid == g)) throw Validation("sampled potential grid mismatch");
    return f;
  }
  throw Validation("unknown potential kind: " + kind);
}

// ---- commands ------------------------------------------------------------

void cmd_algebra_check(const json& cfg, const std::string& dir, RunResult& res) {
  std::uint64_t seed = seed_from_config(cfg);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto rand_mv = [&](int n, bool witt) {
    Multivector m(n, witt);
    for (auto& v : m.c) v = cd(u(rng), u(rng));
    return m;
  };
  double max_assoc = 0.0;
  int trials = cfg.value("trials", 1000);
  for (int t = 0; t < trials; ++t) {
    bool witt = t % 2 == 1;
    Multivector a = rand_mv(3, witt), b = rand_mv(3, witt), c = rand_mv(3, witt);
    max_assoc = std::max(max_assoc, max_abs_diff((a * b) * c, a * (b * c)));
  }
  double max_complex = 0.0;
  for (int t = 0; t < 100; ++t) {
    Multivector a = rand_mv(1, false), b = rand_mv(1, false);
    // Cl_{0,1} ~ C: (x + y e1) <-> x + i y
    const cd I(0.0, 1.0);
    cd ca = a.c[0] + I * a.c[1];
    cd cb = b.c[0] + I * b.c[1];
    Multivector ab = a * b;
    cd cab = ab.c[0] + I * ab.c[1];
    max_complex = std::max(max_complex, std::abs(cab - ca * cb));
  }
  json rep;
  rep["associativity_trials"] = trials;
  rep["max_associativity_error"] = max_assoc;
  rep["max_complex_embedding_error"] = max_complex;
  rep["pass"] = max_assoc < 1e-12 && max_complex < 1e-13;
  std::string path = join_path(dir, "algebra_report.json");
  write_text_file(path, rep.dump(2) + "\n");
  res.outputs.push_back(path);
}

void cmd_identities(const json& cfg, const std::string& dir, RunResult& res) {
  GridSpec g = cfg.contains("grid") ? grid_from_config(cfg)
                                    : GridSpec::unit_square(17);
  json rows = json::array();
  auto add = [&](const std::string& name, double r) {
    rows.push_back({{"case", name}, {"residual", r}});
  };
  CliffordField quad = sample_field(g, g.n, false, [&](const std::array<double, 4>& x) {
    Multivector m(g.n, false);
    m[BladeIndex{}] = x[0] * x[0] + x[0] * x[1];
    m[BladeIndex{1, WittWord::one}] = x[1] * x[1] - 2.0 * x[0];
    return m;
  });
  CliffordField trig = sample_scalar(g, g.n, [&](const std::array<double, 4>& x) {
    return std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
  });
  add("laplace_quadratic", factorization_residual_laplace(quad));
  add("laplace_trig", factorization_residual_laplace(trig));
  add("cauchy_riemann_quadratic", factorization_residual_cauchy_riemann(quad));
  add("helmholtz_k2_quadratic", factorization_residual_helmholtz(quad, 2.0));
  CliffordField a_const = sample_field(g, g.n, false, [&](const std::array<double, 4>&) {
    Multivector m(g.n, false);
    m[BladeIndex{1, WittWord::one}] = 1.0;
    return m;
  });
  CliffordField V_const = sample_scalar(g, g.n, [](const std::array<double, 4>&) {
    return -1.0;
  });
  CliffordField u_sq = sample_scalar(g, g.n, [](const std::array<double, 4>& x) {
    return x[1] * x[1];
  });
  add("miura_const_a_quadratic",
      factorization_residual_miura(u_sq, a_const, V_const));
  GridSpec st = GridSpec::box(g.n + 1, {0, 0, 0, 0}, {1, 1, 1, 1},
                              {g.count[0], g.count[1], 9, 9});
  CliffordField stq = sample_field(st, g.n, true, [&](const std::array<double, 4>& x) {
    Multivector m(g.n, true);
    m[BladeIndex{}] = x[0] * x[0] + x[st.n - 1] + x[0] * x[st.n - 1];
    return m;
  });
  add("parabolic_schrodinger_plus_quadratic",
      factorization_residual_parabolic(stq, +1, ParabolicVariant::schrodinger));
  add("parabolic_heat_minus_quadratic",
      factorization_residual_parabolic(stq, -1, ParabolicVariant::heat));

  json rep;
  rep["grid"] = gridspec_to_json(g);
  rep["rows"] = rows;
  std::string jpath = join_path(dir, "identities_report.json");
  write_text_file(jpath, rep.dump(2) + "\n");
  res.outputs.push_back(jpath);
  std::string csv = "case,residual\n";
  for (const auto& r : rows)
    csv += r.at("case").get<std::string>() + "," +
           format_double(r.at("residual").get<double>()) + "\n";
  std::string cpath = join_path(dir, "identities.csv");
  write_text_file(cpath, csv);
  res.outputs.push_back(cpath);
}

int cmd_miura_solve(const json& cfg, const std::string& dir, RunResult& res) {
  GridSpec g = grid_from_config(cfg);
  if (g.n < 2 || g.n > 3) throw Validation("miura-solve: grid n must be 2 or 3");
  MiuraConfig mc;
  mc.p = default_p(g.n);
  if (cfg.contains("miura")) {
    mc = miura_config_from_json(cfg.at("miura"));
    if (!cfg.at("miura").contains("p")) mc.p = default_p(g.n);
  }
  validate_exponent(mc.p, g.n);
  KernelCache cache = build_kernel_cache(g);
  if (cfg.contains("miura") && cfg.at("miura").value("estimate_constants", false)) {
    auto [k1, C] = estimate_constants(g, mc.p, 16, seed_from_config(cfg), cache);
    mc.k1 = k1;
    mc.C = C;
    mc.k2 = k1 * C * C;
    mc.constants_supplied = false;
  }
  CliffordField V = potential_from_config(cfg, g);
  CliffordField a0(g, g.n, false);
  auto [a, rep] = miura_iterate(V, a0, mc, cache);

  std::string spath = join_path(dir, "solution.csv");
  write_field_csv(spath, a);
  res.outputs.push_back(spath);
  res.outputs.push_back(spath + ".json");
  json jrep = convergence_report_to_json(rep);
  jrep["p"] = mc.p;
  std::string rpath = join_path(dir, "convergence_report.json");
  write_text_file(rpath, jrep.dump(2) + "\n");
  res.outputs.push_back(rpath);
  return rep.diverged ? 3 : 0;
}

int cmd_gp_run(const json& cfg, const std::string& dir, RunResult& res) {
  GridSpec g = grid_from_config(cfg);
  GpConfig gp;
  if (cfg.contains("gp")) gp = gp_config_from_json(cfg.at("gp"));
  MiuraConfig mc;
  mc.p = default_p(g.n);
  if (cfg.contains("miura")) {
    mc = miura_config_from_json(cfg.at("miura"));
    if (!cfg.at("miura").contains("p")) mc.p = default_p(g.n);
  }
  std::string family = "gaussian";
  double coeff = 0.5;
  if (cfg.contains("phi")) {
    family = cfg.at("phi").value("family", family);
    coeff = cfg.at("phi").value("coeff", coeff);
  }
  CliffordField phi = manufactured_phi(family, coeff, g);
  KernelCache cache = build_kernel_cache(g);
  GpReport rep = gp_miura_pipeline(phi, gp, mc, cache);

  std::string vpath = join_path(dir, "effective_potential.csv");
  write_field_csv(vpath, rep.effective_potential_field);
  res.outputs.push_back(vpath);
  res.outputs.push_back(vpath + ".json");
  std::string fpath = join_path(dir, "screened_density.csv");
  write_field_csv(fpath, rep.F_field);
  res.outputs.push_back(fpath);
  res.outputs.push_back(fpath + ".json");
  std::string apath = join_path(dir, "miura_solution.csv");
  write_field_csv(apath, rep.miura_solution);
  res.outputs.push_back(apath);
  res.outputs.push_back(apath + ".json");
  json jrep = gp_report_to_json(rep);
  std::string rpath = join_path(dir, "gp_report.json");
  write_text_file(rpath, jrep.dump(2) + "\n");
  res.outputs.push_back(rpath);
  return rep.miura_report.diverged ? 3 : 0;
}

void cmd_kernels(const json& cfg, const std::string& dir, RunResult& res) {
  (void)cfg;
  std::string csv = "kind,n,x1,x2,x3,t,value_re,value_im,extra\n";
  auto addrow = [&](const std::string& kind, int n,
                    const std::array<double, 4>& x, double t, cd v,
                    double extra) {
    csv += kind + "," + std::to_string(n);
    for (int a = 0; a < 3; ++a) csv += "," + format_double(x[a]);
    csv += "," + format_double(t) + "," + format_double(v.real()) + "," +
           format_double(v.imag()) + "," + format_double(extra) + "\n";
  };
  for (int n = 2; n <= 3; ++n) {
    std::array<std::array<double, 4>, 3> pts{
        {{0.5, 0.25, 0.0, 0.0}, {1.0, 0.0, 0.5, 0.0}, {-0.3, 0.7, 0.2, 0.0}}};
    for (const auto& x : pts) {
      auto k = cauchy_kernel_components(x, n);
      for (int a = 0; a < n; ++a)
        addrow("cauchy_e" + std::to_string(a + 1), n, x, 0.0, cd(k[a], 0.0), 0.0);
    }
    std::array<std::pair<std::array<double, 4>, double>, 5> probes{
        {{{0.5, 0.5, 0.0, 0.0}, 1.0},
         {{0.2, -0.4, 0.1, 0.0}, 0.7},
         {{1.0, 0.0, 0.3, 0.0}, 1.5},
         {{-0.6, 0.8, -0.2, 0.0}, 0.9},
         {{0.1, 0.2, 0.4, 0.0}, 2.0}}};
    for (const auto& [x, t] : probes) {
      cd e = schrodinger_kernel(x, t, n);
      double pde = schrodinger_pde_residual(x, t, n, 1e-3);
      addrow("schrodinger", n, x, t, e, pde);
    }
    Multivector pk = parabolic_kernel({0.3, 0.1, 0.2, 0.0}, -0.8, n);
    addrow("parabolic_f", n, {0.3, 0.1, 0.2, 0.0}, -0.8,
           pk[BladeIndex{0, WittWord::f}], 0.0);
    addrow("parabolic_fp", n, {0.3, 0.1, 0.2, 0.0}, -0.8,
           pk[BladeIndex{0, WittWord::fp}], 0.0);
  }
  std::string path = join_path(dir, "kernels.csv");
  write_text_file(path, csv);
  res.outputs.push_back(path);
}

double study_residual(const std::string& case_name, int level) {
  int count = level + 1;  // level = cells per axis
  GridSpec g = GridSpec::unit_square(count);
  if (case_name == "laplace-quadratic") {
    CliffordField u = sample_scalar(g, g.n, [](const std::array<double, 4>& x) {
      return x[0] * x[0] + 3.0 * x[0] * x[1] - x[1];
    });
    return factorization_residual_laplace(u);
  }
  if (case_name == "proposition-exp-bilinear") {
    CliffordField phi = manufactured_phi("exp-bilinear", 0.1, g);
    return proposition_check(phi);
  }
  if (case_name == "right-inverse") {
    KernelCache cache = build_kernel_cache(g);
    CliffordField f = sample_scalar(g, g.n, [](const std::array<double, 4>&) {
      return 1.0;
    });
    return right_inverse_residual(f, cache);
  }
  if (case_name == "borel-pompeiu") {
    KernelCache cache = build_kernel_cache(g);
    CliffordField f = sample_scalar(g, g.n, [](const std::array<double, 4>&) {
      return 1.0;
    });
    return borel_pompeiu_residual(f, cache);
  }
  throw Validation("unknown study case: " + case_name);
}

}  // namespace

std::string default_output_dir() {
  const char* env = std::getenv(kOutputDirEnv);
  if (env && *env) return env;
  return "out";
}

RunResult run_study(const std::string& case_name,
                    const std::vector<int>& levels,
                    const std::string& output_dir) {
  RunResult res;
  try {
    if (levels.size() < 2) throw Validation("study: need >= 2 levels");
    ensure_dir(output_dir);
    std::vector<double> r(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i)
      r[i] = study_residual(case_name, levels[i]);
    std::string csv = "level,h,residual,order\n";
    json rows = json::array();
    for (std::size_t i = 0; i < levels.size(); ++i) {
      std::string order;
      if (r[i] <= 1e-12)
        order = "exact";
      else if (i + 1 < levels.size() && r[i + 1] > 0.0)
        order = format_double(std::log2(r[i] / r[i + 1]));
      csv += std::to_string(levels[i]) + "," +
             format_double(1.0 / levels[i]) + "," + format_double(r[i]) + "," +
             order + "\n";
      rows.push_back({{"level", levels[i]},
                      {"h", 1.0 / levels[i]},
                      {"residual", r[i]},
                      {"order", order}});
    }
    std::string cpath = join_path(output_dir, "study.csv");
    write_text_file(cpath, csv);
    res.outputs.push_back(cpath);
    json rep;
    rep["case"] = case_name;
    rep["rows"] = rows;
    std::string jpath = join_path(output_dir, "study_report.json");
    write_text_file(jpath, rep.dump(2) + "\n");
    res.outputs.push_back(jpath);
    json cfgj;
    cfgj["command"] = "convergence-study";
    cfgj["case"] = case_name;
    cfgj["levels"] = levels;
    write_manifest(output_dir, cfgj, "convergence-study", 0, res);
  } catch (const Validation& e) {
    res.exit_code = 2;
    res.message = e.what();
  } catch (const std::invalid_argument& e) {
    res.exit_code = 2;
    res.message = e.what();
  } catch (const std::exception& e) {
    res.exit_code = 1;
    res.message = e.what();
  }
  return res;
}

RunResult run_config_json(const nlohmann::json& cfg,
                          const std::string& output_dir, int threads) {
  RunResult res;
  par::set_max_threads(threads);
  try {
    if (!cfg.contains("command")) throw Validation("config: missing \"command\"");
    std::string command = cfg.at("command").get<std::string>();
    std::string dir = output_dir;
    if (dir.empty()) dir = cfg.value("output_dir", default_output_dir());
    ensure_dir(dir);
    int code = 0;
    if (command == "algebra-check")
      cmd_algebra_check(cfg, dir, res);
    else if (command == "identities")
      cmd_identities(cfg, dir, res);
    else if (command == "miura-solve")
      code = cmd_miura_solve(cfg, dir, res);
    else if (command == "gp-run")
      code = cmd_gp_run(cfg, dir, res);
    else if (command == "kernels")
      cmd_kernels(cfg, dir, res);
    else if (command == "convergence-study") {
      std::vector<int> levels = cfg.value("levels", std::vector<int>{16, 32, 64});
      RunResult sub = run_study(cfg.value("case", "borel-pompeiu"), levels, dir);
      return sub;
    } else
      throw Validation("unknown command: " + command);
    write_manifest(dir, cfg, command, seed_from_config(cfg), res);
    res.exit_code = code;
  } catch (const Validation& e) {
    res.exit_code = 2;
    res.message = e.what();
  } catch (const std::invalid_argument& e) {
    res.exit_code = 2;
    res.message = e.what();
  } catch (const nlohmann::json::exception& e) {
    res.exit_code = 2;
    res.message = e.what();
  } catch (const std::exception& e) {
    res.exit_code = 1;
    res.message = e.what();
  }
  return res;
}

RunResult run_config_file(const std::string& path,
                          const std::string& output_override, int threads) {
  RunResult res;
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(read_text_file(path));
  } catch (const std::exception& e) {
    res.exit_code = 2;
    res.message = std::string("config parse error: ") + e.what();
    return res;
  }
  return run_config_json(cfg, output_override, threads);
}

}  // namespace cliffop
