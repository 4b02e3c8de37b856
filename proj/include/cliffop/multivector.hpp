#pragma once
// Clifford algebra Cl_{0,n} (n = 1..4) with an optional Witt extension:
// two nilpotents f, f+ with f*f+ + f+*f = e0, both anticommuting with e_j.
// Basis words are e_A * w with e_A an ordered Euclidean blade and
// w in {1, f, f+, f+f}.  Coefficients are complex.

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace cliffop {

using cd = std::complex<double>;

enum class WittWord : std::uint8_t { one = 0, f = 1, fp = 2, fpf = 3 };

// number of Witt generators in the word (1 -> 0, f/f+ -> 1, f+f -> 2)
int witt_generators(WittWord w);

struct BladeIndex {
  std::uint8_t euclid = 0;  // bitmask, bit j-1 <-> generator e_j
  WittWord witt = WittWord::one;
  bool operator==(const BladeIndex&) const = default;
};

struct WeightedBlade {
  cd coeff;
  BladeIndex blade;
};

// A basis-word product has one term except f*f+ = e0 - f+f (two terms).
struct BladeProduct {
  int count = 0;
  std::array<WeightedBlade, 2> term{};
};

// Normal-ordered product of two basis words in Cl_{0,n} (+ Witt), using
// e_i e_j = -e_j e_i, e_i^2 = -e0, f^2 = (f+)^2 = 0, f e_j = -e_j f,
// f+ e_j = -e_j f+, f f+ = e0 - f+f.
BladeProduct blade_product(BladeIndex a, BladeIndex b, int n);

struct Multivector {
  int n = 2;          // Euclidean generator count, 1..4
  bool witt = false;  // Witt extension enabled
  std::vector<cd> c;  // dense, index = euclid | (witt_word << n)

  Multivector() = default;
  Multivector(int n_, bool witt_ = false);

  int dim() const { return (1 << n) * (witt ? 4 : 1); }
  int index_of(BladeIndex b) const {
    return int(b.euclid) | (int(b.witt) << n);
  }
  BladeIndex blade_of(int idx) const {
    return BladeIndex{std::uint8_t(idx & ((1 << n) - 1)),
                      WittWord(idx >> n)};
  }
  cd& operator[](BladeIndex b) { return c[index_of(b)]; }
  cd operator[](BladeIndex b) const { return c[index_of(b)]; }

  static Multivector basis(int n, BladeIndex b, bool witt = false);
  static Multivector scalar(int n, cd v, bool witt = false);
};

bool compatible(const Multivector& a, const Multivector& b);

Multivector operator+(const Multivector& a, const Multivector& b);
Multivector operator-(const Multivector& a, const Multivector& b);
Multivector operator*(cd s, const Multivector& a);
Multivector operator*(const Multivector& a, const Multivector& b);
Multivector geometric_product(const Multivector& a, const Multivector& b);

double max_abs(const Multivector& a);
double max_abs_diff(const Multivector& a, const Multivector& b);

enum class Involution { principal, reversion, conjugation };

// Sign per basis word by total generator count m (Euclidean + Witt):
// principal (-1)^m, reversion (-1)^{m(m-1)/2}, conjugation (-1)^{m(m+1)/2}.
Multivector involution(const Multivector& a, Involution kind);

// Keeps basis words with |euclid set| == k and trivial Witt word.
Multivector grade_project(const Multivector& a, int k);

// Inverse of a nonzero grade-1 vector x: x^{-1} = -x / (sum_j x_j^2),
// so that x * x^{-1} = e0.  Throws if x is not a plain grade-1 vector or
// the quadratic form value is (numerically) zero.
Multivector vector_inverse(const Multivector& x);

// Canonical blade names: "e0", "e1", "e1e3", "f", "f+", "f+f", "e2f+", ...
std::string blade_name(BladeIndex b, int n);
BladeIndex parse_blade(const std::string& name, int n, bool witt);

}  // namespace cliffop
