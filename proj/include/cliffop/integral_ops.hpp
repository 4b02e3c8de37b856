#pragma once
// The Teodorescu (volume) and Cauchy (boundary) integral operators with a
// displacement-indexed kernel table, the Borel-Pompeiu / right-inverse
// residuals, and closed-form fundamental solutions of the Schrodinger-
// adapted operators.

#include <array>
#include <string>

#include "cliffop/grid.hpp"

namespace cliffop {

// e(x) = -(1/omega_n) x / |x|^n, omega_2 = 2*pi, omega_3 = 4*pi.
// Grade-1 components (throws on x = 0).
std::array<double, 3> cauchy_kernel_components(const std::array<double, 4>& x,
                                               int n);
Multivector cauchy_kernel(const std::array<double, 4>& x, int n);

// Dense displacement-indexed kernel table: entry(i,j) = K(idx_i - idx_j)
// with K(0) = 0, near-field displacements (all |d_a| <= 1) averaged over a
// 4^n-subcell refinement of the source cell, far field evaluated at node
// displacement.  Per-source trapezoid weights are applied at use time.
struct KernelCache {
  GridSpec grid;
  std::vector<double> table;  // [disp_flat * n + component]
  std::vector<double> wq;     // per-node quadrature weight

  long long disp_index(const std::array<int, 4>& d) const {
    long long f = 0;
    for (int a = grid.n - 1; a >= 0; --a)
      f = f * (2 * grid.count[a] - 1) + (d[a] + grid.count[a] - 1);
    return f;
  }
  long long disp_count() const {
    long long m = 1;
    for (int a = 0; a < grid.n; ++a) m *= 2 * grid.count[a] - 1;
    return m;
  }
};

KernelCache build_kernel_cache(const GridSpec& g);

// persistence: a one-line JSON header followed by the raw little-endian
// double blob (table, then weights)
void save_kernel_cache(const KernelCache& c, const std::string& path);
KernelCache load_kernel_cache(const std::string& path);

// Tf(x_i) = sum_j K(i-j) w_j f(y_j) (left Clifford multiplication by the
// grade-1 kernel value); deterministic ascending-j sums, parallel targets.
CliffordField teodorescu_apply(const CliffordField& f, const KernelCache& c);

// per-face traces: average of the face's corner node values
std::vector<Multivector> trace_on_faces(const CliffordField& f,
                                        const std::vector<BoundaryFace>& faces);

// (F g)(x) = -sum_faces e(x - y_face) n g w_face at strictly interior
// nodes; boundary nodes of the output are left at zero.
CliffordField cauchy_boundary_apply(const std::vector<Multivector>& traces,
                                    const std::vector<BoundaryFace>& faces,
                                    const GridSpec& g, int alg_n, bool witt);

// ||F(tr f) + T(Df) - f||_2 / ||f||_2 over nodes >= 3 cells from the
// boundary (0 for f = 0)
double borel_pompeiu_residual(const CliffordField& f, const KernelCache& c);
// ||D(Tf) - f||_2 / ||f||_2 on the same core
double right_inverse_residual(const CliffordField& f, const KernelCache& c);
// ||F(tr(Tf))||_2 / ||f||_2 on the same core — the operational
// "Hardy part of the trace reproduces nothing inside" check
double hardy_residual(const CliffordField& f, const KernelCache& c);

// E(x,t) = H(t) / (2 sqrt(pi i t))^n * exp(i|x|^2/(4t)), principal branch;
// 0 for t <= 0
cd schrodinger_kernel(const std::array<double, 4>& x, double t, int n);

// |(-i d_t - Delta) E| at (x, t) by central differences with step fd_h
double schrodinger_pde_residual(const std::array<double, 4>& x, double t,
                                int n, double fd_h);

// e(x,t) = H(-t)/(2 sqrt(pi i (-t)))^n * exp(-i|x|^2/(4t)) *
//          [ (-i/2t) sum_j x_j e_j + f(-n/2t + i|x|^2/4t^2) + i f+ ]
// (Witt-enabled value; throws on t = 0, zero for t > 0)
Multivector parabolic_kernel(const std::array<double, 4>& x, double t, int n);

}  // namespace cliffop
