#pragma once
// Axis-aligned box grids, Clifford-valued node fields, trapezoid quadrature,
// component-sum Banach norms, and boundary cell-faces with outward normals.

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cliffop/multivector.hpp"

namespace cliffop {

struct GridSpec {
  int n = 2;  // number of axes (spatial grids: 2..3; space-time adds one)
  std::array<double, 4> origin{};
  std::array<double, 4> extent{};
  std::array<int, 4> count{};

  double h(int axis) const { return extent[axis] / (count[axis] - 1); }
  long long nodes() const {
    long long m = 1;
    for (int a = 0; a < n; ++a) m *= count[a];
    return m;
  }
  // flat index: axis 0 fastest
  long long flat(const std::array<int, 4>& idx) const {
    long long f = 0;
    for (int a = n - 1; a >= 0; --a) f = f * count[a] + idx[a];
    return f;
  }
  std::array<int, 4> unflat(long long f) const {
    std::array<int, 4> idx{};
    for (int a = 0; a < n; ++a) {
      idx[a] = int(f % count[a]);
      f /= count[a];
    }
    return idx;
  }
  std::array<double, 4> coords(const std::array<int, 4>& idx) const {
    std::array<double, 4> x{};
    for (int a = 0; a < n; ++a) x[a] = origin[a] + idx[a] * h(a);
    return x;
  }
  bool operator==(const GridSpec&) const = default;

  static GridSpec box(int n, std::array<double, 4> origin,
                      std::array<double, 4> extent, std::array<int, 4> count);
  static GridSpec unit_square(int count_per_axis);
  static GridSpec unit_cube(int count_per_axis);
};

// throws std::invalid_argument on bad axis counts (< 8) or extents
void validate(const GridSpec& g);

struct CliffordField {
  GridSpec grid;
  int alg_n = 2;      // algebra generator count (>= what operators need)
  bool witt = false;
  std::vector<cd> data;  // component-major: data[comp * nodes + node]

  CliffordField() = default;
  CliffordField(const GridSpec& g, int alg_n_, bool witt_ = false);

  int comps() const { return (1 << alg_n) * (witt ? 4 : 1); }
  cd& at(int comp, long long node) { return data[comp * grid.nodes() + node]; }
  cd at(int comp, long long node) const {
    return data[comp * grid.nodes() + node];
  }
  Multivector value(long long node) const;
  void set_value(long long node, const Multivector& m);
};

bool same_shape(const CliffordField& a, const CliffordField& b);

CliffordField operator+(const CliffordField& a, const CliffordField& b);
CliffordField operator-(const CliffordField& a, const CliffordField& b);
CliffordField operator*(cd s, const CliffordField& a);

CliffordField sample_field(
    const GridSpec& g, int alg_n, bool witt,
    const std::function<Multivector(const std::array<double, 4>&)>& fn);

// scalar (e0-component) helper: sample a real scalar field
CliffordField sample_scalar(const GridSpec& g, int alg_n,
                            const std::function<double(const std::array<double, 4>&)>& fn);

// trapezoid quadrature weight of a node (product of per-axis weights,
// h/2 at the ends, h inside)
double quad_weight(const GridSpec& g, const std::array<int, 4>& idx);
std::vector<double> quad_weights(const GridSpec& g);

// ||f||_p combined over components by sqrt(sum_A ||f_A||_p^2)
double lp_norm(const CliffordField& f, double p);
// per component (||f_A||_p^p + sum_j ||d_j f_A||_p^p)^(1/p), then
// sqrt-sum-of-squares across components
double w1p_norm(const CliffordField& f, double p);

// discrete L2 norm restricted to nodes at least `layers` cells away from
// the boundary in every axis (weight = product of spacings)
double core_l2_norm(const CliffordField& f, int layers);
// relative version; returns 0 when the reference norm is 0
double core_l2_relative(const CliffordField& num, const CliffordField& ref,
                        int layers);

std::vector<std::uint8_t> interior_mask(const GridSpec& g);
std::vector<std::uint8_t> core_mask(const GridSpec& g, int layers);

// One face per boundary cell-face: faces tile the boundary, axis-aligned
// unit outward normal, face-center quadrature point, weight = face measure.
struct BoundaryFace {
  long long node = 0;                    // lowest-index corner node on the face
  std::array<double, 4> normal{};        // +-1 in exactly one axis
  double weight = 0.0;                   // surface measure of the face
  std::array<double, 4> center{};        // face-center coordinates
  std::array<long long, 4> corner{};     // the 2^(n-1) corner nodes
  int ncorners = 0;
  int axis = 0;                          // normal axis
  int side = 0;                          // -1 low face, +1 high face
};

std::vector<BoundaryFace> boundary_faces(const GridSpec& g);

Multivector face_normal(const BoundaryFace& f, int alg_n, bool witt = false);

}  // namespace cliffop
