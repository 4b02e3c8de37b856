#pragma once
// Second-order finite-difference realizations of the Dirac operator D,
// the Cauchy-Riemann pair (D, Dbar), the Laplacian, disturbed operators
// D +- k and D +- M^a, the parabolic Dirac operators on space-time grids,
// and the factorization-identity residuals.
//
// All first/second derivative stencils are exact on polynomials of total
// degree <= 2 (central inside, one-sided second-order at the ends).

#include <complex>

#include "cliffop/grid.hpp"

namespace cliffop {

// d/dx_axis: central (f[i+1]-f[i-1])/2h inside,
// (-3f0+4f1-f2)/2h and mirrored at the ends
CliffordField partial_derivative(const CliffordField& f, int axis);
// transpose of the same stencil matrix (for least-squares solves)
CliffordField partial_derivative_transpose(const CliffordField& f, int axis);
// d2/dx_axis^2: central inside, (2f0-5f1+4f2-f3)/h^2 at the ends
CliffordField second_derivative(const CliffordField& f, int axis);

// standard (2n+1)-point Laplacian over the first `axes` axes
// (axes < 0 means all grid axes), componentwise
CliffordField laplacian_apply(const CliffordField& f, int axes = -1);
// the Laplacian the composed Dirac operator realizes:
// sum_j d_j(d_j f) with the first-derivative stencil applied twice
CliffordField laplacian_wide(const CliffordField& f, int axes = -1);

// sparse component-linear action of left/right multiplication by a
// fixed multivector
struct BladeOp {
  int n = 2;
  bool witt = false;
  // col[input comp] = list of (output comp, coefficient)
  std::vector<std::vector<std::pair<int, cd>>> col;
};
BladeOp left_mult_op(const Multivector& g);
BladeOp right_mult_op(const Multivector& g);
CliffordField apply_blade_op(const BladeOp& op, const CliffordField& f);

// nodewise products with another field
CliffordField left_mult_field(const CliffordField& g, const CliffordField& f);
CliffordField right_mult_field(const CliffordField& f, const CliffordField& g);

// D f = sum_j e_j d_j f over the first `axes` axes (axes < 0: all)
CliffordField dirac_apply(const CliffordField& f, int axes = -1);

// Cauchy-Riemann operators on a grid whose axis 0 carries no generator:
// D = d_0 + sum_{j>=1} e_j d_j, Dbar = d_0 - sum_{j>=1} e_j d_j
CliffordField cauchy_riemann_apply(const CliffordField& f, bool bar);

// D f + k f with a complex scalar k
CliffordField disturbed_dirac_apply(const CliffordField& f, cd k);
// D f + sign * (f * a) — the multiplication operator acts from the right
CliffordField disturbed_dirac_right(const CliffordField& f,
                                    const CliffordField& a, int sign);

enum class ParabolicVariant { schrodinger, heat };

// On a space-time grid (last axis = t, first n-1 axes spatial):
//   schrodinger: D_x f + f_w * (dt f) + sign * i * fp_w * f
//   heat:        D_x f + f_w * (dt f) + sign *     fp_w * f
// where f_w, fp_w are the Witt nilpotents acting by left multiplication.
CliffordField parabolic_dirac_apply(const CliffordField& f, int sign,
                                    ParabolicVariant variant);

// Residuals of the factorization identities, as discrete L2 norms over the
// two-layer interior.  Each expression is the identity rearranged to zero.
double factorization_residual_laplace(const CliffordField& u);
double factorization_residual_cauchy_riemann(const CliffordField& u);
double factorization_residual_helmholtz(const CliffordField& u, cd k);
double factorization_residual_miura(const CliffordField& u,
                                    const CliffordField& a,
                                    const CliffordField& V);
double factorization_residual_parabolic(const CliffordField& u, int sign,
                                        ParabolicVariant variant);

}  // namespace cliffop
