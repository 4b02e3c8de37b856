#include "cliffop/gross_pitaevskii.hpp"

#include <cmath>
#include <stdexcept>

#include "cliffop/stencil_ops.hpp"

namespace cliffop {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void validate(const GpConfig& cfg) {
  if (!(cfg.hbar > 0.0) || !(cfg.mass > 0.0))
    throw std::invalid_argument("gp config: hbar and mass must be positive");
  if (cfg.alpha < 0.0)
    throw std::invalid_argument("gp config: alpha must be >= 0");
}

CliffordField helmholtz_solve_F(const CliffordField& phi, double alpha,
                                double* out_residual) {
  if (alpha < 0.0) throw std::invalid_argument("helmholtz_solve_F: alpha >= 0");
  const GridSpec& g = phi.grid;
  long long nn = g.nodes();
  CliffordField rhs(g, phi.alg_n, phi.witt);
  for (long long i = 0; i < nn; ++i)
    rhs.at(0, i) = std::norm(phi.at(0, i));
  if (alpha == 0.0) {
    if (out_residual) *out_residual = 0.0;
    return rhs;  // (1 - 0) F = |phi|^2 exactly
  }

  // CG on interior unknowns for (I + alpha^2 (-Delta_h)) with Dirichlet-0
  std::vector<std::uint8_t> inner = interior_mask(g);
  std::array<double, 4> ih2{};
  for (int a = 0; a < g.n; ++a) ih2[a] = 1.0 / (g.h(a) * g.h(a));
  std::array<long long, 4> stride{};
  {
    long long s = 1;
    for (int a = 0; a < g.n; ++a) {
      stride[a] = s;
      s *= g.count[a];
    }
  }
  auto apply_A = [&](const std::vector<double>& v) {
    std::vector<double> out(nn, 0.0);
    for (long long i = 0; i < nn; ++i) {
      if (!inner[i]) continue;
      double lap = 0.0;
      for (int a = 0; a < g.n; ++a) {
        double vm = inner[i - stride[a]] ? v[i - stride[a]] : 0.0;
        double vp = inner[i + stride[a]] ? v[i + stride[a]] : 0.0;
        lap += (vp - 2.0 * v[i] + vm) * ih2[a];
      }
      out[i] = v[i] - alpha * alpha * lap;
    }
    return out;
  };

  std::vector<double> b(nn, 0.0), x(nn, 0.0);
  for (long long i = 0; i < nn; ++i)
    if (inner[i]) b[i] = rhs.at(0, i).real();
  auto dot = [&](const std::vector<double>& u, const std::vector<double>& v) {
    double s = 0.0;
    for (long long i = 0; i < nn; ++i) s += u[i] * v[i];
    return s;
  };
  std::vector<double> r = b, p = b;
  double rr = dot(r, r), b2 = std::sqrt(dot(b, b));
  double rel = b2 > 0.0 ? std::sqrt(rr) / b2 : 0.0;
  long long cap = 100000;
  for (long long it = 0; it < cap && rel > 1e-10; ++it) {
    std::vector<double> Ap = apply_A(p);
    double pAp = dot(p, Ap);
    if (pAp <= 0.0) break;
    double alpha_cg = rr / pAp;
    for (long long i = 0; i < nn; ++i) {
      x[i] += alpha_cg * p[i];
      r[i] -= alpha_cg * Ap[i];
    }
    double rr2 = dot(r, r);
    double beta = rr2 / rr;
    rr = rr2;
    rel = b2 > 0.0 ? std::sqrt(rr) / b2 : 0.0;
    for (long long i = 0; i < nn; ++i) p[i] = r[i] + beta * p[i];
  }
  if (rel > 1e-9)
    throw std::runtime_error("helmholtz_solve_F: CG failed to converge");
  if (out_residual) *out_residual = rel;
  CliffordField F(g, phi.alg_n, phi.witt);
  for (long long i = 0; i < nn; ++i)
    if (inner[i]) F.at(0, i) = x[i];
  return F;
}

CliffordField trap_potential_field(const GpConfig& cfg, const GridSpec& g,
                                   int alg_n) {
  switch (cfg.trap.kind) {
    case TrapSpec::Kind::zero:
      return CliffordField(g, alg_n, false);
    case TrapSpec::Kind::harmonic:
      return sample_scalar(g, alg_n, [&](const std::array<double, 4>& x) {
        double x2 = 0.0;
        for (int a = 0; a < g.n; ++a) x2 += x[a] * x[a];
        return 0.5 * cfg.mass * cfg.trap.omega * cfg.trap.omega * x2;
      });
    case TrapSpec::Kind::sampled:
      if (!(cfg.trap.field.grid == g))
        throw std::invalid_argument("trap field grid mismatch");
      return cfg.trap.field;
  }
  throw std::invalid_argument("bad trap kind");
}

CliffordField assemble_effective_potential(const CliffordField& F,
                                           const CliffordField& trap,
                                           const GpConfig& cfg) {
  if (!same_shape(F, trap))
    throw std::invalid_argument("assemble_effective_potential: grid mismatch");
  validate(cfg);
  double scale = -2.0 * cfg.mass / (cfg.hbar * cfg.hbar);
  CliffordField v(F.grid, F.alg_n, F.witt);
  long long nn = F.grid.nodes();
  for (long long i = 0; i < nn; ++i)
    v.at(0, i) = scale * (cfg.g * F.at(0, i) + trap.at(0, i) - cfg.mu);
  return v;
}

GpReport gp_miura_pipeline(const CliffordField& phi, const GpConfig& cfg,
                           const MiuraConfig& mcfg, const KernelCache& cache) {
  validate(cfg);
  GpReport rep;
  rep.F_field = helmholtz_solve_F(phi, cfg.alpha, &rep.F_solve_residual);
  CliffordField trap = trap_potential_field(cfg, phi.grid, phi.alg_n);
  rep.effective_potential_field =
      assemble_effective_potential(rep.F_field, trap, cfg);
  const CliffordField& veff = rep.effective_potential_field;

  // (i) logarithmic-derivative route
  CliffordField a = log_derivative(phi);
  CliffordField prop =
      dirac_apply(a) - vector_norm_squared_field(a) - veff;
  rep.proposition_residual = core_l2_norm(prop, 2);
  CliffordField lap = laplacian_apply(phi);
  CliffordField sres(phi.grid, phi.alg_n, phi.witt);
  long long nn = phi.grid.nodes();
  for (long long i = 0; i < nn; ++i)
    sres.at(0, i) = -lap.at(0, i) - veff.at(0, i) * phi.at(0, i);
  rep.schrodinger_residual = core_l2_norm(sres, 2);

  // (ii) fixed-point route: Da = V_fp + |a|^2 with V_fp = v_eff
  CliffordField a0(phi.grid, phi.alg_n, phi.witt);
  auto [sol, mrep] = miura_iterate(veff, a0, mcfg, cache);
  rep.miura_solution = sol;
  rep.miura_report = mrep;
  return rep;
}

double bessel_k0(double z) {
  if (!(z > 0.0)) throw std::invalid_argument("bessel_k0: z must be positive");
  const double euler_gamma = 0.57721566490153286061;
  if (z <= 2.0) {
    double t = z * z / 4.0;
    double term = 1.0, i0 = 1.0, s = 0.0, hk = 0.0;
    for (int k = 1; k <= 80; ++k) {
      term *= t / (double(k) * double(k));
      hk += 1.0 / double(k);
      i0 += term;
      s += term * hk;
      if (term < 1e-19 * i0) break;
    }
    return -(std::log(z / 2.0) + euler_gamma) * i0 + s;
  }
  // K0(z) ~ sqrt(pi/2z) e^{-z} [1 + sum_k prod_j (-(2j-1)^2) / (8z j)],
  // truncated at the smallest term
  double sum = 1.0, term = 1.0, prev = 1.0;
  for (int k = 1; k <= 40; ++k) {
    double odd = 2.0 * k - 1.0;
    term *= -(odd * odd) / (8.0 * z * double(k));
    if (std::abs(term) >= prev) break;
    sum += term;
    prev = std::abs(term);
  }
  return std::sqrt(kPi / (2.0 * z)) * std::exp(-z) * sum;
}

double effective_potential_kernel(double r, double alpha, int dim) {
  if (!(r > 0.0)) throw std::invalid_argument("effective_potential_kernel: r > 0");
  if (!(alpha > 0.0))
    throw std::invalid_argument("effective_potential_kernel: alpha > 0");
  if (dim == 3) return std::exp(-r / alpha) / (4.0 * kPi * alpha * alpha * r);
  if (dim == 2) return bessel_k0(r / alpha) / (2.0 * kPi * alpha * alpha);
  throw std::invalid_argument("effective_potential_kernel: dim must be 2 or 3");
}

double scattering_coupling(double alpha_s, const GpConfig& cfg) {
  validate(cfg);
  if (!(alpha_s > 0.0))
    throw std::invalid_argument("scattering_coupling: alpha_s > 0");
  return 4.0 * kPi * cfg.hbar * cfg.hbar * alpha_s / cfg.mass;
}

}  // namespace cliffop
