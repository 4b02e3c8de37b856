#include "cliffop/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "cliffop/stencil_ops.hpp"

namespace cliffop {

GridSpec GridSpec::box(int n, std::array<double, 4> origin,
                       std::array<double, 4> extent, std::array<int, 4> count) {
  GridSpec g;
  g.n = n;
  g.origin = origin;
  g.extent = extent;
  g.count = count;
  validate(g);
  return g;
}

GridSpec GridSpec::unit_square(int m) {
  return box(2, {0.0, 0.0}, {1.0, 1.0}, {m, m});
}

GridSpec GridSpec::unit_cube(int m) {
  return box(3, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {m, m, m});
}

void validate(const GridSpec& g) {
  if (g.n < 1 || g.n > 4) throw std::invalid_argument("grid: n must be 1..4");
  for (int a = 0; a < g.n; ++a) {
    if (g.count[a] < 8)
      throw std::invalid_argument("grid: axis counts must be >= 8");
    if (!(g.extent[a] > 0.0))
      throw std::invalid_argument("grid: extents must be positive");
  }
}

CliffordField::CliffordField(const GridSpec& g, int alg_n_, bool witt_)
    : grid(g), alg_n(alg_n_), witt(witt_) {
  if (alg_n < 1 || alg_n > 4)
    throw std::invalid_argument("field: algebra n must be 1..4");
  data.assign(std::size_t(comps()) * grid.nodes(), cd{});
}

Multivector CliffordField::value(long long node) const {
  Multivector m(alg_n, witt);
  for (int k = 0; k < comps(); ++k) m.c[k] = at(k, node);
  return m;
}

void CliffordField::set_value(long long node, const Multivector& m) {
  if (m.n != alg_n || m.witt != witt)
    throw std::invalid_argument("field: multivector shape mismatch");
  for (int k = 0; k < comps(); ++k) at(k, node) = m.c[k];
}

bool same_shape(const CliffordField& a, const CliffordField& b) {
  return a.grid == b.grid && a.alg_n == b.alg_n && a.witt == b.witt;
}

CliffordField operator+(const CliffordField& a, const CliffordField& b) {
  if (!same_shape(a, b)) throw std::invalid_argument("field shape mismatch");
  CliffordField r = a;
  for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] += b.data[i];
  return r;
}

CliffordField operator-(const CliffordField& a, const CliffordField& b) {
  if (!same_shape(a, b)) throw std::invalid_argument("field shape mismatch");
  CliffordField r = a;
  for (std::size_t i = 0; i < r.data.size(); ++i) r.data[i] -= b.data[i];
  return r;
}

CliffordField operator*(cd s, const CliffordField& a) {
  CliffordField r = a;
  for (auto& v : r.data) v *= s;
  return r;
}

CliffordField sample_field(
    const GridSpec& g, int alg_n, bool witt,
    const std::function<Multivector(const std::array<double, 4>&)>& fn) {
  validate(g);
  CliffordField f(g, alg_n, witt);
  long long nn = g.nodes();
  for (long long i = 0; i < nn; ++i) {
    Multivector v = fn(g.coords(g.unflat(i)));
    f.set_value(i, v);
  }
  return f;
}

CliffordField sample_scalar(
    const GridSpec& g, int alg_n,
    const std::function<double(const std::array<double, 4>&)>& fn) {
  return sample_field(g, alg_n, false, [&](const std::array<double, 4>& x) {
    return Multivector::scalar(alg_n, fn(x));
  });
}

double quad_weight(const GridSpec& g, const std::array<int, 4>& idx) {
  double w = 1.0;
  for (int a = 0; a < g.n; ++a) {
    double ha = g.h(a);
    w *= (idx[a] == 0 || idx[a] == g.count[a] - 1) ? 0.5 * ha : ha;
  }
  return w;
}

std::vector<double> quad_weights(const GridSpec& g) {
  long long nn = g.nodes();
  std::vector<double> w(nn);
  for (long long i = 0; i < nn; ++i) w[i] = quad_weight(g, g.unflat(i));
  return w;
}

namespace {

// per-component discrete Lp norm via the trapezoid Riemann sum
double comp_lp(const CliffordField& f, int comp, double p,
               const std::vector<double>& w) {
  long long nn = f.grid.nodes();
  double s = 0.0;
  for (long long i = 0; i < nn; ++i)
    s += w[i] * std::pow(std::abs(f.at(comp, i)), p);
  return std::pow(s, 1.0 / p);
}

}  // namespace

double lp_norm(const CliffordField& f, double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("lp_norm: need 1 < p < inf");
  std::vector<double> w = quad_weights(f.grid);
  double acc = 0.0;
  for (int k = 0; k < f.comps(); ++k) {
    double nk = comp_lp(f, k, p, w);
    acc += nk * nk;
  }
  return std::sqrt(acc);
}

double w1p_norm(const CliffordField& f, double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("w1p_norm: need 1 < p < inf");
  std::vector<double> w = quad_weights(f.grid);
  std::vector<CliffordField> d;
  d.reserve(f.grid.n);
  for (int a = 0; a < f.grid.n; ++a) d.push_back(partial_derivative(f, a));
  double acc = 0.0;
  for (int k = 0; k < f.comps(); ++k) {
    double s = std::pow(comp_lp(f, k, p, w), p);
    for (int a = 0; a < f.grid.n; ++a) s += std::pow(comp_lp(d[a], k, p, w), p);
    double nk = std::pow(s, 1.0 / p);
    acc += nk * nk;
  }
  return std::sqrt(acc);
}

double core_l2_norm(const CliffordField& f, int layers) {
  const GridSpec& g = f.grid;
  for (int a = 0; a < g.n; ++a)
    if (g.count[a] <= 2 * layers)
      throw std::invalid_argument("core_l2_norm: grid too small for core");
  double vol = 1.0;
  for (int a = 0; a < g.n; ++a) vol *= g.h(a);
  long long nn = g.nodes();
  double s = 0.0;
  for (long long i = 0; i < nn; ++i) {
    auto idx = g.unflat(i);
    bool in = true;
    for (int a = 0; a < g.n; ++a)
      if (idx[a] < layers || idx[a] > g.count[a] - 1 - layers) in = false;
    if (!in) continue;
    for (int k = 0; k < f.comps(); ++k) s += vol * std::norm(f.at(k, i));
  }
  return std::sqrt(s);
}

double core_l2_relative(const CliffordField& num, const CliffordField& ref,
                        int layers) {
  double d = core_l2_norm(num, layers);
  double r = core_l2_norm(ref, layers);
  if (r == 0.0) return 0.0;
  return d / r;
}

std::vector<std::uint8_t> interior_mask(const GridSpec& g) {
  return core_mask(g, 1);
}

std::vector<std::uint8_t> core_mask(const GridSpec& g, int layers) {
  long long nn = g.nodes();
  std::vector<std::uint8_t> m(nn, 0);
  for (long long i = 0; i < nn; ++i) {
    auto idx = g.unflat(i);
    bool in = true;
    for (int a = 0; a < g.n; ++a)
      if (idx[a] < layers || idx[a] > g.count[a] - 1 - layers) in = false;
    m[i] = in ? 1 : 0;
  }
  return m;
}

std::vector<BoundaryFace> boundary_faces(const GridSpec& g) {
  validate(g);
  if (g.n < 2 || g.n > 3)
    throw std::invalid_argument("boundary_faces: spatial dimension must be 2 or 3");
  std::vector<BoundaryFace> faces;
  // tangential axes, in ascending order
  for (int axis = 0; axis < g.n; ++axis) {
    std::array<int, 3> tang{};
    int nt = 0;
    for (int a = 0; a < g.n; ++a)
      if (a != axis) tang[nt++] = a;
    // number of cell-faces per tangential axis = count-1
    std::array<int, 3> fc{};
    for (int t = 0; t < nt; ++t) fc[t] = g.count[tang[t]] - 1;
    long long nfaces = 1;
    for (int t = 0; t < nt; ++t) nfaces *= fc[t];
    for (int side = 0; side <= 1; ++side) {
      for (long long fi = 0; fi < nfaces; ++fi) {
        // decode face cell multi-index along tangential axes
        long long rem = fi;
        std::array<int, 3> cell{};
        for (int t = 0; t < nt; ++t) {
          cell[t] = int(rem % fc[t]);
          rem /= fc[t];
        }
        BoundaryFace bf;
        bf.axis = axis;
        bf.side = side == 0 ? -1 : +1;
        bf.normal[axis] = double(bf.side);
        std::array<int, 4> idx{};
        idx[axis] = side == 0 ? 0 : g.count[axis] - 1;
        double w = 1.0;
        for (int t = 0; t < nt; ++t) {
          idx[tang[t]] = cell[t];
          w *= g.h(tang[t]);
        }
        bf.weight = w;
        // face center
        auto x = g.coords(idx);
        for (int t = 0; t < nt; ++t) x[tang[t]] += 0.5 * g.h(tang[t]);
        bf.center = x;
        // corner nodes: all combinations of +0/+1 along tangential axes
        bf.ncorners = 1 << nt;
        for (int cmask = 0; cmask < bf.ncorners; ++cmask) {
          auto cidx = idx;
          for (int t = 0; t < nt; ++t)
            if (cmask & (1 << t)) cidx[tang[t]] += 1;
          bf.corner[cmask] = g.flat(cidx);
        }
        bf.node = bf.corner[0];
        for (int c = 1; c < bf.ncorners; ++c)
          bf.node = std::min(bf.node, bf.corner[c]);
        faces.push_back(bf);
      }
    }
  }
  return faces;
}

Multivector face_normal(const BoundaryFace& f, int alg_n, bool witt) {
  Multivector m(alg_n, witt);
  for (int a = 0; a < alg_n; ++a)
    if (f.normal[a] != 0.0)
      m[BladeIndex{std::uint8_t(1u << a), WittWord::one}] = f.normal[a];
  return m;
}

}  // namespace cliffop
