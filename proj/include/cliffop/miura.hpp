#pragma once
// Picard iteration for the nonlinear first-order equation Da + a^2 = V in
// fixed-point form a = T(V + |a|^2), with the contraction-lemma constants,
// the logarithmic-derivative oracle, and a least-squares inverse of
// a = D(ln phi).

#include <cstdint>
#include <utility>

#include "cliffop/grid.hpp"
#include "cliffop/integral_ops.hpp"

namespace cliffop {

struct MiuraConfig {
  double p = 2.0;       // Lebesgue exponent; window: n > p >= n/2 > 1 (n > 2),
                        // n > p > 1 (n = 2)
  double tol = 1e-10;   // stopping tolerance on ||a_n - a_{n-1}|| in W^{1,p}
  int max_iter = 200;
  double k1 = 0.0;      // ||T||_{L^p -> W^{1,p}} (supplied or estimated)
  double C = 0.0;       // embedding constant W^{1,p} -> L^{2p}
  double k2 = 0.0;      // derived: k1 * C^2 (filled when <= 0)
  bool constants_supplied = false;  // true: treat k1, C as sharp, not bounds
};

double default_p(int n);
void validate_exponent(double p, int n);

struct ConvergenceReport {
  double norm_V = 0.0;      // ||V||_p
  double threshold = 0.0;   // 1/(4 k1 k2)
  bool small_enough = false;
  double W = 0.0;           // bound radius
  double L = 0.0;           // contraction constant
  int iterations = 0;
  std::vector<double> residual_history;  // ||a_n - a_{n-1}||_{W^{1,p}}
  std::vector<double> ratio_history;     // successive residual ratios
  std::vector<double> norm_history;      // ||a_n||_{W^{1,p}}
  double final_fp_residual = 0.0;        // ||a - T(V + |a|^2)||_{W^{1,p}}
  double final_strong_residual = 0.0;    // core ||Da - |a|^2 e0 - V||_2
  bool diverged = false;
};

// randomized lower-bound estimates of k1 and C (x1.25 safety factor);
// probe 0 is the constant field, later probes are seeded smooth fields,
// and the probe stream is prefix-stable in `trials`
std::pair<double, double> estimate_constants(const GridSpec& g, double p,
                                             int trials, std::uint64_t seed,
                                             const KernelCache& cache);

struct ConvergenceBounds {
  double threshold = 0.0;
  bool small_enough = false;
  double W = 0.0;
  double L = 0.0;
};

// threshold = 1/(4 k1 k2); W = sqrt((k1/k2) (threshold - ||V||_p)) and
// L = 1 - sqrt(4 k1 k2 (threshold - ||V||_p)) — algebraically identical to
// the textbook forms and exact (W = 0, L = 1) at ||V||_p == threshold
ConvergenceBounds convergence_bounds(double norm_V, double k1, double k2);

std::pair<CliffordField, ConvergenceReport> miura_iterate(
    const CliffordField& V, const CliffordField& a0, const MiuraConfig& cfg,
    const KernelCache& cache);

// (fp, strong): ||a - T(V+|a|^2)||_{W^{1,p}} and the two-layer-interior
// L2 norm of Da - |a|^2 e0 - V
std::pair<double, double> miura_residual(const CliffordField& a,
                                         const CliffordField& V,
                                         const KernelCache& cache, double p);

// (D phi)/phi for a nowhere-zero real scalar field
CliffordField log_derivative(const CliffordField& phi);

// with v = -(Delta phi)/phi and a = log_derivative(phi), the two-layer
// interior L2 norm of Da - |a|^2 e0 - v
double proposition_check(const CliffordField& phi);

// least-squares scalar s with grad s ~ a (mean-zero gauge); if
// out_residual is non-null it receives ||Ds - a||_2 / ||a||_2
CliffordField reconstruct_log_phi(const CliffordField& a,
                                  double* out_residual = nullptr);

// nodewise |a|^2 = sum_j a_j^2 as a scalar field (a grade-1)
CliffordField vector_norm_squared_field(const CliffordField& a);

}  // namespace cliffop
