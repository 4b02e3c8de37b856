#pragma once
// Stationary Gross-Pitaevskii reduction: the screened-Poisson solve
// (1 - alpha^2 Delta)F = |phi|^2, effective-potential assembly
// v_eff = -(2m/hbar^2)(g F + V - mu) so that -Delta phi - v_eff phi = 0,
// the pipeline into the Miura solver, and the Yukawa / MacDonald
// effective-interaction kernels.

#include "cliffop/grid.hpp"
#include "cliffop/miura.hpp"

namespace cliffop {

struct TrapSpec {
  enum class Kind { zero, harmonic, sampled } kind = Kind::zero;
  double omega = 1.0;    // harmonic: V(x) = m omega^2 |x|^2 / 2
  CliffordField field;   // sampled
};

struct GpConfig {
  double hbar = 1.0;
  double mass = 1.0;
  double g = 0.0;     // coupling (energy * volume)
  double alpha = 0.0; // interaction range (length)
  double mu = 0.0;    // chemical potential
  TrapSpec trap;
};

void validate(const GpConfig& cfg);

struct GpReport {
  double F_solve_residual = 0.0;        // final relative CG residual
  CliffordField effective_potential_field;
  ConvergenceReport miura_report;
  double proposition_residual = 0.0;    // core ||Da - |a|^2 e0 - v_eff||
  double schrodinger_residual = 0.0;    // core ||-Delta phi - v_eff phi||
  CliffordField miura_solution;
  CliffordField F_field;
};

// (I - alpha^2 Delta_h) F = |phi|^2, homogeneous Dirichlet data, CG to
// relative residual <= 1e-10; alpha = 0 returns |phi|^2 exactly.
// out_residual (optional) receives the final relative residual.
CliffordField helmholtz_solve_F(const CliffordField& phi, double alpha,
                                double* out_residual = nullptr);

CliffordField trap_potential_field(const GpConfig& cfg, const GridSpec& g,
                                   int alg_n);

// v_eff = -(2m/hbar^2) (g F + V - mu)
CliffordField assemble_effective_potential(const CliffordField& F,
                                           const CliffordField& trap,
                                           const GpConfig& cfg);

GpReport gp_miura_pipeline(const CliffordField& phi, const GpConfig& cfg,
                           const MiuraConfig& mcfg, const KernelCache& cache);

// dim 3: exp(-r/alpha) / (4 pi alpha^2 r); dim 2: K0(r/alpha) / (2 pi alpha^2)
double effective_potential_kernel(double r, double alpha, int dim);

// MacDonald function K0: power series for z <= 2, asymptotic expansion with
// adaptive truncation at the smallest term for z > 2
double bessel_k0(double z);

// g = 4 pi hbar^2 alpha_s / m
double scattering_coupling(double alpha_s, const GpConfig& cfg);

}  // namespace cliffop
