#include "cliffop/multivector.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace cliffop {

int witt_generators(WittWord w) {
  switch (w) {
    case WittWord::one: return 0;
    case WittWord::f: return 1;
    case WittWord::fp: return 1;
    case WittWord::fpf: return 2;
  }
  return 0;
}

namespace {

// swap count when merging ordered blades A and B: pairs (i in A, j in B)
// with i > j
int merge_swaps(unsigned a, unsigned b) {
  int swaps = 0;
  a >>= 1;
  while (a) {
    swaps += std::popcount(a & b);
    a >>= 1;
  }
  return swaps;
}

// Witt word table: w1 * w2 -> up to two (coeff, word) terms.
// f*f+ = e0 - f+f; f+*f = f+f; (f+f)(f+f) = f+f; f*f = f+*f+ = 0;
// f*(f+f) = f; (f+f)*f+ = f+; f+*(f+f) = (f+f)*f = 0.
struct WittTerms {
  int count;
  std::array<std::pair<double, WittWord>, 2> t;
};

WittTerms witt_mul(WittWord a, WittWord b) {
  using W = WittWord;
  if (a == W::one) return {1, {{{1.0, b}, {}}}};
  if (b == W::one) return {1, {{{1.0, a}, {}}}};
  if (a == W::f) {
    if (b == W::f) return {0, {}};
    if (b == W::fp) return {2, {{{1.0, W::one}, {-1.0, W::fpf}}}};
    return {1, {{{1.0, W::f}, {}}}};  // f * f+f = f
  }
  if (a == W::fp) {
    if (b == W::f) return {1, {{{1.0, W::fpf}, {}}}};
    return {0, {}};  // f+ * f+ = f+ * f+f = 0
  }
  // a == f+f
  if (b == W::f) return {0, {}};
  if (b == W::fp) return {1, {{{1.0, W::fp}, {}}}};
  return {1, {{{1.0, W::fpf}, {}}}};  // f+f * f+f = f+f
}

}  // namespace

BladeProduct blade_product(BladeIndex a, BladeIndex b, int n) {
  if (n < 1 || n > 4) throw std::invalid_argument("blade_product: n must be 1..4");
  unsigned mask = (1u << n) - 1u;
  if ((a.euclid & ~mask) || (b.euclid & ~mask))
    throw std::invalid_argument("blade_product: blade index out of range for n");

  // (e_A w1)(e_B w2): move e_B left past w1 (each Witt generator
  // anticommutes with each e_j), multiply Euclidean parts, then Witt words.
  int g1 = witt_generators(a.witt);
  int cross = g1 * std::popcount(unsigned(b.euclid));
  int swaps = merge_swaps(a.euclid, b.euclid);
  int squares = std::popcount(unsigned(a.euclid & b.euclid));  // e_i^2 = -e0
  double sign = ((cross + swaps + squares) % 2) ? -1.0 : 1.0;
  std::uint8_t eout = a.euclid ^ b.euclid;

  WittTerms wt = witt_mul(a.witt, b.witt);
  BladeProduct out;
  out.count = wt.count;
  for (int i = 0; i < wt.count; ++i) {
    out.term[i].coeff = sign * wt.t[i].first;
    out.term[i].blade = BladeIndex{eout, wt.t[i].second};
  }
  return out;
}

Multivector::Multivector(int n_, bool witt_) : n(n_), witt(witt_) {
  if (n < 1 || n > 4) throw std::invalid_argument("Multivector: n must be 1..4");
  c.assign(dim(), cd{0.0, 0.0});
}

Multivector Multivector::basis(int n, BladeIndex b, bool witt) {
  if (b.witt != WittWord::one && !witt)
    throw std::invalid_argument("Multivector::basis: Witt word requires witt=true");
  Multivector m(n, witt);
  m[b] = 1.0;
  return m;
}

Multivector Multivector::scalar(int n, cd v, bool witt) {
  Multivector m(n, witt);
  m[BladeIndex{}] = v;
  return m;
}

bool compatible(const Multivector& a, const Multivector& b) {
  return a.n == b.n && a.witt == b.witt;
}

Multivector operator+(const Multivector& a, const Multivector& b) {
  if (!compatible(a, b)) throw std::invalid_argument("multivector shape mismatch");
  Multivector r = a;
  for (int i = 0; i < r.dim(); ++i) r.c[i] += b.c[i];
  return r;
}

Multivector operator-(const Multivector& a, const Multivector& b) {
  if (!compatible(a, b)) throw std::invalid_argument("multivector shape mismatch");
  Multivector r = a;
  for (int i = 0; i < r.dim(); ++i) r.c[i] -= b.c[i];
  return r;
}

Multivector operator*(cd s, const Multivector& a) {
  Multivector r = a;
  for (auto& v : r.c) v *= s;
  return r;
}

Multivector geometric_product(const Multivector& a, const Multivector& b) {
  if (!compatible(a, b)) throw std::invalid_argument("multivector shape mismatch");
  Multivector r(a.n, a.witt);
  int d = a.dim();
  for (int i = 0; i < d; ++i) {
    if (a.c[i] == cd{}) continue;
    BladeIndex bi = a.blade_of(i);
    for (int j = 0; j < d; ++j) {
      if (b.c[j] == cd{}) continue;
      BladeProduct p = blade_product(bi, b.blade_of(j), a.n);
      for (int t = 0; t < p.count; ++t)
        r[p.term[t].blade] += p.term[t].coeff * a.c[i] * b.c[j];
    }
  }
  return r;
}

Multivector operator*(const Multivector& a, const Multivector& b) {
  return geometric_product(a, b);
}

double max_abs(const Multivector& a) {
  double m = 0.0;
  for (const auto& v : a.c) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const Multivector& a, const Multivector& b) {
  if (!compatible(a, b)) throw std::invalid_argument("multivector shape mismatch");
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a.c[i] - b.c[i]));
  return m;
}

Multivector involution(const Multivector& a, Involution kind) {
  Multivector r = a;
  for (int i = 0; i < a.dim(); ++i) {
    BladeIndex b = a.blade_of(i);
    int m = std::popcount(unsigned(b.euclid)) + witt_generators(b.witt);
    int e = 0;
    switch (kind) {
      case Involution::principal: e = m; break;
      case Involution::reversion: e = m * (m - 1) / 2; break;
      case Involution::conjugation: e = m * (m + 1) / 2; break;
    }
    if (e % 2) r.c[i] = -r.c[i];
  }
  return r;
}

Multivector grade_project(const Multivector& a, int k) {
  Multivector r(a.n, a.witt);
  for (int i = 0; i < a.dim(); ++i) {
    BladeIndex b = a.blade_of(i);
    if (b.witt == WittWord::one && std::popcount(unsigned(b.euclid)) == k)
      r.c[i] = a.c[i];
  }
  return r;
}

Multivector vector_inverse(const Multivector& x) {
  for (int i = 0; i < x.dim(); ++i) {
    BladeIndex b = x.blade_of(i);
    bool grade1 = (b.witt == WittWord::one) &&
                  std::popcount(unsigned(b.euclid)) == 1;
    if (!grade1 && x.c[i] != cd{})
      throw std::invalid_argument("vector_inverse: input is not grade-1");
  }
  cd q{};  // quadratic form value: x^2 = -q e0 with q = sum_j x_j^2
  for (int j = 0; j < x.n; ++j) {
    cd xj = x[BladeIndex{std::uint8_t(1u << j), WittWord::one}];
    q += xj * xj;
  }
  if (std::abs(q) < 1e-300)
    throw std::invalid_argument("vector_inverse: vector squares to zero");
  return (-1.0 / q) * x;
}

std::string blade_name(BladeIndex b, int n) {
  std::string s;
  for (int j = 0; j < n; ++j)
    if (b.euclid & (1u << j)) s += "e" + std::to_string(j + 1);
  switch (b.witt) {
    case WittWord::one: break;
    case WittWord::f: s += "f"; break;
    case WittWord::fp: s += "f+"; break;
    case WittWord::fpf: s += "f+f"; break;
  }
  if (s.empty()) s = "e0";
  return s;
}

BladeIndex parse_blade(const std::string& name, int n, bool witt) {
  BladeIndex b;
  std::size_t i = 0;
  if (name == "e0") return b;
  while (i < name.size() && name[i] == 'e') {
    if (i + 1 >= name.size() || !std::isdigit((unsigned char)name[i + 1])) break;
    int g = name[i + 1] - '0';
    if (g < 1 || g > n)
      throw std::invalid_argument("parse_blade: generator out of range: " + name);
    if (b.euclid & (1u << (g - 1)))
      throw std::invalid_argument("parse_blade: repeated generator: " + name);
    b.euclid |= std::uint8_t(1u << (g - 1));
    i += 2;
  }
  std::string rest = name.substr(i);
  if (rest == "")
    b.witt = WittWord::one;
  else if (rest == "f")
    b.witt = WittWord::f;
  else if (rest == "f+")
    b.witt = WittWord::fp;
  else if (rest == "f+f")
    b.witt = WittWord::fpf;
  else
    throw std::invalid_argument("parse_blade: bad blade name: " + name);
  if (b.witt != WittWord::one && !witt)
    throw std::invalid_argument("parse_blade: Witt blade in plain algebra: " + name);
  if (i == 0 && rest.empty())
    throw std::invalid_argument("parse_blade: empty blade name");
  return b;
}

}  // namespace cliffop
