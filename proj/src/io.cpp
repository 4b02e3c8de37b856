#include "cliffop/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cliffop/hash.hpp"

namespace cliffop {

std::string fnv1a64_hex(const std::string& s) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(s)));
  return buf;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json multivector_to_json(const Multivector& m) {
  json j;
  j["n"] = m.n;
  j["witt"] = m.witt;
  j["terms"] = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    if (m.c[i] == cd{}) continue;
    json t;
    t["blade"] = blade_name(m.blade_of(i), m.n);
    t["re"] = m.c[i].real();
    t["im"] = m.c[i].imag();
    j["terms"].push_back(t);
  }
  return j;
}

Multivector multivector_from_json(const json& j) {
  int n = j.at("n").get<int>();
  bool witt = j.at("witt").get<bool>();
  Multivector m(n, witt);
  for (const auto& t : j.at("terms")) {
    BladeIndex b = parse_blade(t.at("blade").get<std::string>(), n, witt);
    m[b] = cd(t.at("re").get<double>(), t.at("im").get<double>());
  }
  return m;
}

json gridspec_to_json(const GridSpec& g) {
  json j;
  j["n"] = g.n;
  j["origin"] = json::array();
  j["extent"] = json::array();
  j["count"] = json::array();
  for (int a = 0; a < g.n; ++a) {
    j["origin"].push_back(g.origin[a]);
    j["extent"].push_back(g.extent[a]);
    j["count"].push_back(g.count[a]);
  }
  return j;
}

GridSpec gridspec_from_json(const json& j) {
  GridSpec g;
  g.n = j.at("n").get<int>();
  if (g.n < 1 || g.n > 4) throw std::invalid_argument("grid json: bad n");
  for (int a = 0; a < g.n; ++a) {
    g.origin[a] = j.at("origin").at(a).get<double>();
    g.extent[a] = j.at("extent").at(a).get<double>();
    g.count[a] = j.at("count").at(a).get<int>();
  }
  validate(g);
  return g;
}

json convergence_report_to_json(const ConvergenceReport& r) {
  json j;
  j["norm_V"] = r.norm_V;
  j["threshold"] = r.threshold;
  j["small_enough"] = r.small_enough;
  j["W"] = r.W;
  j["L"] = r.L;
  j["iterations"] = r.iterations;
  j["residual_history"] = r.residual_history;
  j["ratio_history"] = r.ratio_history;
  j["norm_history"] = r.norm_history;
  j["final_fp_residual"] = r.final_fp_residual;
  j["final_strong_residual"] = r.final_strong_residual;
  j["diverged"] = r.diverged;
  return j;
}

json gp_report_to_json(const GpReport& r) {
  json j;
  j["F_solve_residual"] = r.F_solve_residual;
  j["proposition_residual"] = r.proposition_residual;
  j["schrodinger_residual"] = r.schrodinger_residual;
  j["miura_report"] = convergence_report_to_json(r.miura_report);
  return j;
}

json gp_config_to_json(const GpConfig& c) {
  json j;
  j["hbar"] = c.hbar;
  j["mass"] = c.mass;
  j["g"] = c.g;
  j["alpha"] = c.alpha;
  j["mu"] = c.mu;
  json t;
  switch (c.trap.kind) {
    case TrapSpec::Kind::zero: t["kind"] = "zero"; break;
    case TrapSpec::Kind::harmonic:
      t["kind"] = "harmonic";
      t["omega"] = c.trap.omega;
      break;
    case TrapSpec::Kind::sampled: t["kind"] = "sampled"; break;
  }
  j["trap"] = t;
  return j;
}

GpConfig gp_config_from_json(const json& j) {
  GpConfig c;
  if (j.contains("hbar")) c.hbar = j.at("hbar").get<double>();
  if (j.contains("mass")) c.mass = j.at("mass").get<double>();
  if (j.contains("g")) c.g = j.at("g").get<double>();
  if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
  if (j.contains("mu")) c.mu = j.at("mu").get<double>();
  if (j.contains("trap")) {
    std::string kind = j.at("trap").at("kind").get<std::string>();
    if (kind == "zero")
      c.trap.kind = TrapSpec::Kind::zero;
    else if (kind == "harmonic") {
      c.trap.kind = TrapSpec::Kind::harmonic;
      c.trap.omega = j.at("trap").at("omega").get<double>();
    } else
      throw std::invalid_argument("gp config: unsupported trap kind: " + kind);
  }
  validate(c);
  return c;
}

json miura_config_to_json(const MiuraConfig& c) {
  json j;
  j["p"] = c.p;
  j["tol"] = c.tol;
  j["max_iter"] = c.max_iter;
  j["k1"] = c.k1;
  j["C"] = c.C;
  j["k2"] = c.k2;
  j["constants_supplied"] = c.constants_supplied;
  return j;
}

MiuraConfig miura_config_from_json(const json& j) {
  MiuraConfig c;
  if (j.contains("p")) c.p = j.at("p").get<double>();
  if (j.contains("tol")) c.tol = j.at("tol").get<double>();
  if (j.contains("max_iter")) c.max_iter = j.at("max_iter").get<int>();
  if (j.contains("k1")) c.k1 = j.at("k1").get<double>();
  if (j.contains("C")) c.C = j.at("C").get<double>();
  if (j.contains("k2")) c.k2 = j.at("k2").get<double>();
  if (j.contains("constants_supplied"))
    c.constants_supplied = j.at("constants_supplied").get<bool>();
  if (c.tol <= 0.0) throw std::invalid_argument("miura config: tol must be > 0");
  if (c.max_iter <= 0)
    throw std::invalid_argument("miura config: max_iter must be > 0");
  return c;
}

void write_field_csv(const std::string& csv_path, const CliffordField& f) {
  std::ostringstream out;
  out << "x1";
  for (int a = 1; a < f.grid.n; ++a) out << ",x" << a + 1;
  out << ",blade,re,im\n";
  long long nn = f.grid.nodes();
  Multivector probe(f.alg_n, f.witt);
  for (long long i = 0; i < nn; ++i) {
    auto x = f.grid.coords(f.grid.unflat(i));
    for (int k = 0; k < f.comps(); ++k) {
      cd v = f.at(k, i);
      if (v == cd{}) continue;
      for (int a = 0; a < f.grid.n; ++a) {
        if (a) out << ',';
        out << format_double(x[a]);
      }
      out << ',' << blade_name(probe.blade_of(k), f.alg_n) << ','
          << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
  }
  write_text_file(csv_path, out.str());

  json side;
  side["grid"] = gridspec_to_json(f.grid);
  side["alg_n"] = f.alg_n;
  side["witt"] = f.witt;
  write_text_file(csv_path + ".json", side.dump(2) + "\n");
}

CliffordField read_field_csv(const std::string& csv_path) {
  json side = json::parse(read_text_file(csv_path + ".json"));
  GridSpec g = gridspec_from_json(side.at("grid"));
  CliffordField f(g, side.at("alg_n").get<int>(), side.at("witt").get<bool>());
  std::istringstream in(read_text_file(csv_path));
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (int(cells.size()) != g.n + 3)
      throw std::runtime_error("field csv: bad row: " + line);
    std::array<int, 4> idx{};
    for (int a = 0; a < g.n; ++a) {
      double x = std::stod(cells[a]);
      double t = (x - g.origin[a]) / g.h(a);
      idx[a] = int(std::lround(t));
      if (std::abs(t - idx[a]) > 1e-6 || idx[a] < 0 || idx[a] >= g.count[a])
        throw std::runtime_error("field csv: off-grid coordinate: " + line);
    }
    BladeIndex b = parse_blade(cells[g.n], f.alg_n, f.witt);
    long long node = g.flat(idx);
    f.at(Multivector(f.alg_n, f.witt).index_of(b), node) =
        cd(std::stod(cells[g.n + 1]), std::stod(cells[g.n + 2]));
  }
  return f;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cliffop
