#include "cliffop/integral_ops.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "cliffop/hash.hpp"
#include "cliffop/parallel.hpp"
#include "cliffop/stencil_ops.hpp"

namespace cliffop {

namespace {

constexpr double kPi = 3.14159265358979323846;

double unit_sphere_area(int n) {
  if (n == 2) return 2.0 * kPi;
  if (n == 3) return 4.0 * kPi;
  throw std::invalid_argument("cauchy_kernel: dimension must be 2 or 3");
}

// left multiplication by e_{a+1}: single signed component permutation
struct GeneratorLmul {
  std::array<std::vector<int>, 3> out;
  std::array<std::vector<double>, 3> sign;
};

GeneratorLmul generator_lmul_tables(int alg_n, bool witt, int n_gen) {
  GeneratorLmul t;
  Multivector probe(alg_n, witt);
  int d = probe.dim();
  for (int a = 0; a < n_gen; ++a) {
    t.out[a].resize(d);
    t.sign[a].resize(d);
    BladeIndex ea{std::uint8_t(1u << a), WittWord::one};
    for (int c = 0; c < d; ++c) {
      BladeProduct p = blade_product(ea, probe.blade_of(c), alg_n);
      // Euclidean left factors always produce exactly one term
      t.out[a][c] = probe.index_of(p.term[0].blade);
      t.sign[a][c] = p.term[0].coeff.real();
    }
  }
  return t;
}

std::string grid_fingerprint(const GridSpec& g) {
  char buf[256];
  std::string s = "n=" + std::to_string(g.n);
  for (int a = 0; a < g.n; ++a) {
    std::snprintf(buf, sizeof buf, ";%.17g,%.17g,%d", g.origin[a], g.extent[a],
                  g.count[a]);
    s += buf;
  }
  return s;
}

}  // namespace

std::array<double, 3> cauchy_kernel_components(const std::array<double, 4>& x,
                                               int n) {
  double r2 = 0.0;
  for (int a = 0; a < n; ++a) r2 += x[a] * x[a];
  if (r2 == 0.0) throw std::invalid_argument("cauchy_kernel: x = 0");
  double rn = std::pow(std::sqrt(r2), n);
  double c = -1.0 / (unit_sphere_area(n) * rn);
  std::array<double, 3> k{};
  for (int a = 0; a < n; ++a) k[a] = c * x[a];
  return k;
}

Multivector cauchy_kernel(const std::array<double, 4>& x, int n) {
  auto k = cauchy_kernel_components(x, n);
  Multivector m(n, false);
  for (int a = 0; a < n; ++a)
    m[BladeIndex{std::uint8_t(1u << a), WittWord::one}] = k[a];
  return m;
}

KernelCache build_kernel_cache(const GridSpec& g) {
  validate(g);
  if (g.n < 2 || g.n > 3)
    throw std::invalid_argument("kernel cache: dimension must be 2 or 3");
  KernelCache c;
  c.grid = g;
  c.wq = quad_weights(g);
  long long nd = c.disp_count();
  c.table.assign(std::size_t(nd) * g.n, 0.0);
  std::array<double, 4> h{};
  for (int a = 0; a < g.n; ++a) h[a] = g.h(a);

  par::parallel_for(nd, [&](long long b, long long e) {
    for (long long fi = b; fi < e; ++fi) {
      // decode displacement
      std::array<int, 4> d{};
      long long rem = fi;
      bool zero = true, near = true;
      for (int a = 0; a < g.n; ++a) {
        d[a] = int(rem % (2 * g.count[a] - 1)) - (g.count[a] - 1);
        rem /= 2 * g.count[a] - 1;
        if (d[a] != 0) zero = false;
        if (std::abs(d[a]) > 1) near = false;
      }
      if (zero) continue;  // odd kernel: centered self-cell integrates to 0
      std::array<double, 4> xd{};
      for (int a = 0; a < g.n; ++a) xd[a] = d[a] * h[a];
      double* row = c.table.data() + std::size_t(fi) * g.n;
      if (!near) {
        auto k = cauchy_kernel_components(xd, g.n);
        for (int a = 0; a < g.n; ++a) row[a] = k[a];
        continue;
      }
      // near field: average over 4^n subcell centers of the source cell
      int nsub = 1;
      for (int a = 0; a < g.n; ++a) nsub *= 4;
      std::array<double, 3> acc{};
      for (int s = 0; s < nsub; ++s) {
        std::array<double, 4> xs = xd;
        int srem = s;
        for (int a = 0; a < g.n; ++a) {
          int q = srem % 4;
          srem /= 4;
          xs[a] -= ((q + 0.5) / 4.0 - 0.5) * h[a];
        }
        auto k = cauchy_kernel_components(xs, g.n);
        for (int a = 0; a < g.n; ++a) acc[a] += k[a];
      }
      for (int a = 0; a < g.n; ++a) row[a] = acc[a] / nsub;
    }
  });
  return c;
}

void save_kernel_cache(const KernelCache& c, const std::string& path) {
  nlohmann::json hdr;
  hdr["format"] = "cliffop-kernel-cache";
  hdr["version"] = 1;
  hdr["n"] = c.grid.n;
  for (int a = 0; a < c.grid.n; ++a) {
    hdr["origin"].push_back(c.grid.origin[a]);
    hdr["extent"].push_back(c.grid.extent[a]);
    hdr["count"].push_back(c.grid.count[a]);
  }
  hdr["grid_hash"] = fnv1a64_hex(grid_fingerprint(c.grid));
  hdr["table"] = c.table.size();
  hdr["weights"] = c.wq.size();
  hdr["layout"] = "displacement-major real components, then node weights";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write kernel cache: " + path);
  out << hdr.dump() << '\n';
  out.write(reinterpret_cast<const char*>(c.table.data()),
            std::streamsize(c.table.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(c.wq.data()),
            std::streamsize(c.wq.size() * sizeof(double)));
  if (!out) throw std::runtime_error("kernel cache write failed: " + path);
}

KernelCache load_kernel_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read kernel cache: " + path);
  std::string line;
  std::getline(in, line);
  nlohmann::json hdr = nlohmann::json::parse(line);
  if (hdr.at("format") != "cliffop-kernel-cache")
    throw std::runtime_error("bad kernel cache header: " + path);
  KernelCache c;
  GridSpec g;
  g.n = hdr.at("n").get<int>();
  for (int a = 0; a < g.n; ++a) {
    g.origin[a] = hdr.at("origin")[a].get<double>();
    g.extent[a] = hdr.at("extent")[a].get<double>();
    g.count[a] = hdr.at("count")[a].get<int>();
  }
  if (hdr.at("grid_hash") != fnv1a64_hex(grid_fingerprint(g)))
    throw std::runtime_error("kernel cache grid hash mismatch: " + path);
  c.grid = g;
  c.table.resize(hdr.at("table").get<std::size_t>());
  c.wq.resize(hdr.at("weights").get<std::size_t>());
  in.read(reinterpret_cast<char*>(c.table.data()),
          std::streamsize(c.table.size() * sizeof(double)));
  in.read(reinterpret_cast<char*>(c.wq.data()),
          std::streamsize(c.wq.size() * sizeof(double)));
  if (!in) throw std::runtime_error("kernel cache blob truncated: " + path);
  return c;
}

CliffordField teodorescu_apply(const CliffordField& f, const KernelCache& c) {
  if (!(f.grid == c.grid))
    throw std::invalid_argument("teodorescu_apply: grid mismatch");
  int n = f.grid.n;
  if (f.alg_n < n)
    throw std::invalid_argument("teodorescu_apply: algebra too small");
  GeneratorLmul lm = generator_lmul_tables(f.alg_n, f.witt, n);
  int comps = f.comps();
  long long nn = f.grid.nodes();
  std::vector<std::array<int, 4>> idx(nn);
  for (long long i = 0; i < nn; ++i) idx[i] = f.grid.unflat(i);
  CliffordField r(f.grid, f.alg_n, f.witt);

  par::parallel_for(nn, [&](long long b, long long e) {
    std::array<cd, 64> acc;
    for (long long i = b; i < e; ++i) {
      for (int k = 0; k < comps; ++k) acc[k] = cd{};
      const auto& ii = idx[i];
      for (long long j = 0; j < nn; ++j) {
        std::array<int, 4> d{};
        for (int a = 0; a < n; ++a) d[a] = ii[a] - idx[j][a];
        const double* row = c.table.data() + std::size_t(c.disp_index(d)) * n;
        double wj = c.wq[j];
        for (int a = 0; a < n; ++a) {
          double ka = row[a] * wj;
          if (ka == 0.0) continue;
          const int* out = lm.out[a].data();
          const double* sg = lm.sign[a].data();
          for (int k = 0; k < comps; ++k)
            acc[out[k]] += (ka * sg[k]) * f.at(k, j);
        }
      }
      for (int k = 0; k < comps; ++k) r.at(k, i) = acc[k];
    }
  });
  return r;
}

std::vector<Multivector> trace_on_faces(const CliffordField& f,
                                        const std::vector<BoundaryFace>& faces) {
  std::vector<Multivector> tr;
  tr.reserve(faces.size());
  for (const auto& bf : faces) {
    Multivector m(f.alg_n, f.witt);
    for (int c = 0; c < bf.ncorners; ++c) {
      Multivector v = f.value(bf.corner[c]);
      for (int k = 0; k < m.dim(); ++k) m.c[k] += v.c[k];
    }
    for (auto& v : m.c) v /= double(bf.ncorners);
    tr.push_back(m);
  }
  return tr;
}

CliffordField cauchy_boundary_apply(const std::vector<Multivector>& traces,
                                    const std::vector<BoundaryFace>& faces,
                                    const GridSpec& g, int alg_n, bool witt) {
  if (traces.size() != faces.size())
    throw std::invalid_argument("cauchy_boundary_apply: trace/face count mismatch");
  int n = g.n;
  if (n < 2 || n > 3)
    throw std::invalid_argument("cauchy_boundary_apply: dimension must be 2 or 3");
  GeneratorLmul lm = generator_lmul_tables(alg_n, witt, n);
  CliffordField r(g, alg_n, witt);
  int comps = r.comps();
  // fold the operator sign and the face weight into n(y)*g(y):
  // (F g)(x) = -sum e(x-y) n g w
  std::vector<std::vector<cd>> fv(faces.size());
  for (std::size_t fi = 0; fi < faces.size(); ++fi) {
    Multivector ng = face_normal(faces[fi], alg_n, witt) * traces[fi];
    fv[fi].resize(comps);
    for (int k = 0; k < comps; ++k) fv[fi][k] = -faces[fi].weight * ng.c[k];
  }
  std::vector<std::uint8_t> inner = interior_mask(g);
  long long nn = g.nodes();
  par::parallel_for(nn, [&](long long b, long long e) {
    std::array<cd, 64> acc;
    for (long long i = b; i < e; ++i) {
      if (!inner[i]) continue;  // boundary targets stay zero (kernel singular)
      for (int k = 0; k < comps; ++k) acc[k] = cd{};
      auto x = g.coords(g.unflat(i));
      for (std::size_t fi = 0; fi < faces.size(); ++fi) {
        std::array<double, 4> dx{};
        for (int a = 0; a < n; ++a) dx[a] = x[a] - faces[fi].center[a];
        auto kv = cauchy_kernel_components(dx, n);
        const auto& v = fv[fi];
        for (int a = 0; a < n; ++a) {
          double ka = kv[a];
          const int* out = lm.out[a].data();
          const double* sg = lm.sign[a].data();
          for (int k = 0; k < comps; ++k) acc[out[k]] += (ka * sg[k]) * v[k];
        }
      }
      for (int k = 0; k < comps; ++k) r.at(k, i) = acc[k];
    }
  });
  return r;
}

namespace {

CliffordField boundary_reproduction(const CliffordField& f,
                                    const KernelCache& c) {
  auto faces = boundary_faces(c.grid);
  auto tr = trace_on_faces(f, faces);
  return cauchy_boundary_apply(tr, faces, c.grid, f.alg_n, f.witt);
}

}  // namespace

double borel_pompeiu_residual(const CliffordField& f, const KernelCache& c) {
  if (!(f.grid == c.grid))
    throw std::invalid_argument("borel_pompeiu_residual: grid mismatch");
  CliffordField lhs = boundary_reproduction(f, c) +
                      teodorescu_apply(dirac_apply(f), c) - f;
  return core_l2_relative(lhs, f, 3);
}

double right_inverse_residual(const CliffordField& f, const KernelCache& c) {
  if (!(f.grid == c.grid))
    throw std::invalid_argument("right_inverse_residual: grid mismatch");
  CliffordField lhs = dirac_apply(teodorescu_apply(f, c)) - f;
  return core_l2_relative(lhs, f, 3);
}

double hardy_residual(const CliffordField& f, const KernelCache& c) {
  if (!(f.grid == c.grid))
    throw std::invalid_argument("hardy_residual: grid mismatch");
  CliffordField ftr = boundary_reproduction(teodorescu_apply(f, c), c);
  return core_l2_relative(ftr, f, 3);
}

cd schrodinger_kernel(const std::array<double, 4>& x, double t, int n) {
  if (n < 2 || n > 3)
    throw std::invalid_argument("schrodinger_kernel: dimension must be 2 or 3");
  if (t <= 0.0) return cd{};
  double x2 = 0.0;
  for (int a = 0; a < n; ++a) x2 += x[a] * x[a];
  cd lg = std::log(cd(0.0, kPi * t));  // Log(pi i t), principal branch
  cd expo = cd(0.0, x2 / (4.0 * t)) - 0.5 * double(n) * lg;
  return std::exp(expo) / std::pow(2.0, n);
}

double schrodinger_pde_residual(const std::array<double, 4>& x, double t,
                                int n, double fd_h) {
  cd et = (schrodinger_kernel(x, t + fd_h, n) -
           schrodinger_kernel(x, t - fd_h, n)) / (2.0 * fd_h);
  cd lap{};
  cd e0 = schrodinger_kernel(x, t, n);
  for (int a = 0; a < n; ++a) {
    auto xp = x, xm = x;
    xp[a] += fd_h;
    xm[a] -= fd_h;
    lap += (schrodinger_kernel(xp, t, n) - 2.0 * e0 +
            schrodinger_kernel(xm, t, n)) / (fd_h * fd_h);
  }
  return std::abs(cd(0.0, -1.0) * et - lap);
}

Multivector parabolic_kernel(const std::array<double, 4>& x, double t, int n) {
  if (n < 2 || n > 3)
    throw std::invalid_argument("parabolic_kernel: dimension must be 2 or 3");
  if (t == 0.0) throw std::invalid_argument("parabolic_kernel: t = 0");
  Multivector m(n, true);
  if (t > 0.0) return m;  // H(-t) factor
  double x2 = 0.0;
  for (int a = 0; a < n; ++a) x2 += x[a] * x[a];
  cd lg = std::log(cd(0.0, kPi * (-t)));
  cd pref = std::exp(cd(0.0, -x2 / (4.0 * t)) - 0.5 * double(n) * lg) /
            std::pow(2.0, n);
  for (int a = 0; a < n; ++a)
    m[BladeIndex{std::uint8_t(1u << a), WittWord::one}] =
        pref * cd(0.0, -x[a] / (2.0 * t));
  m[BladeIndex{0, WittWord::f}] =
      pref * cd(-double(n) / (2.0 * t), x2 / (4.0 * t * t));
  m[BladeIndex{0, WittWord::fp}] = pref * cd(0.0, 1.0);
  return m;
}

}  // namespace cliffop
