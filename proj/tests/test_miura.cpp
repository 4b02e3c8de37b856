#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cliffop/miura.hpp"
#include "cliffop/stencil_ops.hpp"

using namespace cliffop;

namespace {

constexpr double kPi = 3.14159265358979323846;

double field_max_diff(const CliffordField& a, const CliffordField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

}  // namespace

TEST_CASE("exponent window by dimension") {
  CHECK(default_p(2) == 1.5);
  CHECK(default_p(3) == 2.0);
  CHECK_NOTHROW(validate_exponent(1.5, 2));
  CHECK_THROWS_AS(validate_exponent(2.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(validate_exponent(1.0, 2), std::invalid_argument);
  CHECK_NOTHROW(validate_exponent(2.0, 3));
  CHECK_NOTHROW(validate_exponent(1.5, 3));
  CHECK_THROWS_AS(validate_exponent(3.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(validate_exponent(1.4, 3), std::invalid_argument);
}

TEST_CASE("contraction-lemma constants at the three pinned operating points") {
  double k1 = 0.73, k2 = 1.91;
  double thr = 1.0 / (4.0 * k1 * k2);
  // zero potential: W = 1/(2 k2), L = 0
  ConvergenceBounds b0 = convergence_bounds(0.0, k1, k2);
  CHECK(b0.small_enough);
  CHECK(std::abs(b0.W - 1.0 / (2.0 * k2)) <= 4e-16 / (2.0 * k2));
  CHECK(b0.L == 0.0);
  CHECK(b0.threshold == thr);
  // at the threshold: W = 0 and L = 1, bitwise
  ConvergenceBounds bt = convergence_bounds(thr, k1, k2);
  CHECK(bt.W == 0.0);
  CHECK(bt.L == 1.0);
  CHECK(bt.small_enough);
  // at 3/4 of the threshold: L = 1/2 to machine precision
  ConvergenceBounds bh = convergence_bounds(3.0 / (16.0 * k1 * k2), k1, k2);
  CHECK(std::abs(bh.L - 0.5) <= 4e-16);
  // beyond the threshold: not small enough, W clamps at 0
  ConvergenceBounds bx = convergence_bounds(2.0 * thr, k1, k2);
  CHECK(!bx.small_enough);
  CHECK(bx.W == 0.0);
}

TEST_CASE("bound monotonicity in the potential norm") {
  double k1 = 0.5, k2 = 2.0;
  double thr = 1.0 / (4.0 * k1 * k2);
  double prevW = 1e300, prevL = -1.0;
  for (int s = 0; s <= 10; ++s) {
    ConvergenceBounds b = convergence_bounds(thr * s / 10.0, k1, k2);
    CHECK(b.W <= prevW);
    CHECK(b.L >= prevL);
    prevW = b.W;
    prevL = b.L;
  }
}

TEST_CASE("operator-norm probes are deterministic and prefix-stable") {
  GridSpec g = GridSpec::unit_square(17);
  KernelCache cache = build_kernel_cache(g);
  auto [k1a, Ca] = estimate_constants(g, 1.5, 16, 42, cache);
  auto [k1b, Cb] = estimate_constants(g, 1.5, 16, 42, cache);
  CHECK(k1a == k1b);
  CHECK(Ca == Cb);
  CHECK(k1a > 0.0);
  CHECK(Ca > 0.0);
  // more probes can only raise a max-based estimate
  auto [k1c, Cc] = estimate_constants(g, 1.5, 32, 42, cache);
  CHECK(k1c >= k1a);
  CHECK(Cc >= Ca);
  // a different seed gives a different (but still positive) estimate
  auto [k1d, Cd] = estimate_constants(g, 1.5, 16, 43, cache);
  CHECK(k1d > 0.0);
  CHECK(Cd > 0.0);
  CHECK_THROWS_AS(estimate_constants(g, 1.5, 4, 42, cache),
                  std::invalid_argument);
}

TEST_CASE("zero potential solves in one step, exactly") {
  GridSpec g = GridSpec::unit_square(17);
  KernelCache cache = build_kernel_cache(g);
  CliffordField V(g, 2, false);
  CliffordField a0(g, 2, false);
  MiuraConfig cfg;
  cfg.p = 1.5;
  auto [a, rep] = miura_iterate(V, a0, cfg, cache);
  CHECK(rep.iterations == 1);
  CHECK(!rep.diverged);
  CHECK(rep.final_fp_residual == 0.0);
  for (const cd& v : a.data) CHECK(v == cd(0.0));
}

TEST_CASE("fixed points built from the volume operator are recovered") {
  GridSpec g = GridSpec::unit_square(17);
  KernelCache cache = build_kernel_cache(g);
  CliffordField b = sample_scalar(g, 2, [](const std::array<double, 4>& x) {
    return 0.3 * std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
  });
  CliffordField astar = teodorescu_apply(b, cache);
  CliffordField V = b - vector_norm_squared_field(astar);
  MiuraConfig cfg;
  cfg.p = 1.5;
  cfg.tol = 1e-13;
  cfg.max_iter = 100;
  CliffordField a0(g, 2, false);
  auto [a, rep] = miura_iterate(V, a0, cfg, cache);
  CHECK(!rep.diverged);
  CHECK(rep.iterations < 50);
  double rel = w1p_norm(a - astar, 1.5) / w1p_norm(astar, 1.5);
  CHECK(rel < 1e-6);
  CHECK(rep.final_fp_residual < 1e-10);
  // every contraction ratio below one once the iteration settles
  for (std::size_t i = 1; i < rep.ratio_history.size(); ++i)
    CHECK(rep.ratio_history[i] < 1.0);
}

TEST_CASE("iterates stay grade-1 and real") {
  GridSpec g = GridSpec::unit_square(17);
  KernelCache cache = build_kernel_cache(g);
  CliffordField V = sample_scalar(g, 2, [](const std::array<double, 4>& x) {
    return 0.2 * x[0] * (1 - x[0]);
  });
  MiuraConfig cfg;
  cfg.p = 1.5;
  auto [a, rep] = miura_iterate(V, CliffordField(g, 2, false), cfg, cache);
  CHECK(!rep.diverged);
  Multivector probe(2, false);
  for (int k = 0; k < a.comps(); ++k) {
    BladeIndex bl = probe.blade_of(k);
    bool grade1 = bl.euclid == 1 || bl.euclid == 2;
    for (long long i = 0; i < g.nodes(); ++i) {
      if (!grade1) CHECK(a.at(k, i) == cd(0.0));
      else CHECK(a.at(k, i).imag() == 0.0);
    }
  }
}

TEST_CASE("supplied constants gate the iteration report") {
  GridSpec g = GridSpec::unit_square(17);
  KernelCache cache = build_kernel_cache(g);
  CliffordField V = sample_scalar(g, 2, [](const std::array<double, 4>& x) {
    return 0.05 * std::sin(kPi * x[0]);
  });
  MiuraConfig cfg;
  cfg.p = 1.5;
  cfg.k1 = 2.0;
  cfg.C = 1.5;
  cfg.k2 = cfg.k1 * cfg.C * cfg.C;
  cfg.constants_supplied = true;
  auto [a, rep] = miura_iterate(V, CliffordField(g, 2, false), cfg, cache);
  CHECK(rep.threshold == 1.0 / (4.0 * cfg.k1 * cfg.k2));
  CHECK(rep.norm_V == lp_norm(V, 1.5));
  if (rep.small_enough) {
    CHECK(rep.L < 1.0);
    CHECK(rep.W > 0.0);
    // the solution respects the certified radius
    CHECK(w1p_norm(a, 1.5) <= rep.W * (1.0 + 1e-9));
  }
  CHECK(!rep.diverged);
}

TEST_CASE("divergence is flagged, not silently absorbed") {
  GridSpec g = GridSpec::unit_square(17);
  KernelCache cache = build_kernel_cache(g);
  CliffordField V = sample_scalar(g, 2, [](const std::array<double, 4>& x) {
    return 4000.0 * (1.0 + x[0]);
  });
  MiuraConfig cfg;
  cfg.p = 1.5;
  cfg.max_iter = 60;
  auto [a, rep] = miura_iterate(V, CliffordField(g, 2, false), cfg, cache);
  CHECK(rep.diverged);
}

TEST_CASE("shape and content validation") {
  GridSpec g = GridSpec::unit_square(17);
  KernelCache cache = build_kernel_cache(g);
  MiuraConfig cfg;
  cfg.p = 1.5;
  // V must be a real scalar field
  CliffordField badV(g, 2, false);
  for (long long i = 0; i < g.nodes(); ++i) badV.at(1, i) = 1.0;
  CHECK_THROWS_AS(miura_iterate(badV, CliffordField(g, 2, false), cfg, cache),
                  std::invalid_argument);
  // a0 must be a real grade-1 field
  CliffordField bada(g, 2, false);
  for (long long i = 0; i < g.nodes(); ++i) bada.at(0, i) = 1.0;
  CliffordField V(g, 2, false);
  CHECK_THROWS_AS(miura_iterate(V, bada, cfg, cache), std::invalid_argument);
  // grid mismatch with the cache
  GridSpec g2 = GridSpec::unit_square(19);
  CliffordField V2(g2, 2, false);
  CHECK_THROWS_AS(miura_iterate(V2, CliffordField(g2, 2, false), cfg, cache),
                  std::invalid_argument);
  // exponent window enforced
  MiuraConfig bad = cfg;
  bad.p = 2.5;
  CHECK_THROWS_AS(miura_iterate(V, CliffordField(g, 2, false), bad, cache),
                  std::invalid_argument);
}

TEST_CASE("logarithmic derivative oracles") {
  GridSpec g = GridSpec::unit_square(33);
  // phi = exp(x1): a = e1 up to O(h^2)
  CliffordField phi = sample_scalar(g, 2, [](const std::array<double, 4>& x) {
    return std::exp(x[0]);
  });
  CliffordField a = log_derivative(phi);
  double h = g.h(0);
  CliffordField e1 = sample_field(g, 2, false, [](const std::array<double, 4>&) {
    return Multivector::basis(2, BladeIndex{1, WittWord::one});
  });
  CHECK(field_max_diff(a, e1) < h * h);
  // constant phi: a = 0 up to cancellation roundoff in the edge stencils
  CliffordField cphi = sample_scalar(g, 2, [](const std::array<double, 4>&) {
    return 3.7;
  });
  CHECK(field_max_diff(log_derivative(cphi), CliffordField(g, 2, false)) < 1e-13);
  // gaussian: a = -x1 e1 - x2 e2
  CliffordField gphi = sample_scalar(g, 2, [](const std::array<double, 4>& x) {
    return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1]));
  });
  CliffordField ga = log_derivative(gphi);
  CliffordField expect = sample_field(g, 2, false, [](const std::array<double, 4>& x) {
    Multivector m(2, false);
    m[BladeIndex{1, WittWord::one}] = -x[0];
    m[BladeIndex{2, WittWord::one}] = -x[1];
    return m;
  });
  CHECK(field_max_diff(ga, expect) < 5 * h * h);
  // zeros are rejected
  CliffordField zphi = sample_scalar(g, 2, [](const std::array<double, 4>& x) {
    return x[0] - 0.5;
  });
  CHECK_THROWS_AS(log_derivative(zphi), std::invalid_argument);
  // non-scalar input rejected
  CHECK_THROWS_AS(log_derivative(e1), std::invalid_argument);
}

TEST_CASE("substitution identity residual decays at second order") {
  auto run = [](double (*phi)(const std::array<double, 4>&)) {
    std::vector<double> r;
    for (int count : {17, 33, 65}) {
      GridSpec g = GridSpec::unit_square(count);
      r.push_back(proposition_check(sample_scalar(g, 2, phi)));
    }
    return r;
  };
  auto r1 = run([](const std::array<double, 4>& x) { return std::exp(x[0]); });
  double order1 = std::log2(r1[0] / r1[2]) / 2.0;
  CHECK(order1 > 1.7);
  CHECK(order1 < 2.3);
  auto r2 = run([](const std::array<double, 4>& x) {
    return std::exp(0.1 * x[0] * x[1]);
  });
  double order2 = std::log2(r2[0] / r2[2]) / 2.0;
  CHECK(order2 > 1.7);
  CHECK(order2 < 2.3);
  // phi = 1 gives a = 0, v = 0: identically zero residual
  GridSpec g = GridSpec::unit_square(17);
  CliffordField one = sample_scalar(g, 2, [](const std::array<double, 4>&) {
    return 1.0;
  });
  CHECK(proposition_check(one) == 0.0);
}

TEST_CASE("scalar reconstruction from a gradient-type field") {
  GridSpec g = GridSpec::unit_square(17);
  // a = e1: s = x1 - mean(x1)
  CliffordField a = sample_field(g, 2, false, [](const std::array<double, 4>&) {
    return Multivector::basis(2, BladeIndex{1, WittWord::one});
  });
  double res = -1.0;
  CliffordField s = reconstruct_log_phi(a, &res);
  CHECK(res < 1e-8);
  CliffordField expect = sample_scalar(g, 2, [](const std::array<double, 4>& x) {
    return x[0] - 0.5;
  });
  CHECK(field_max_diff(s, expect) < 1e-8);
  // a field with curl cannot be reconstructed: residual stays O(1)
  CliffordField curl = sample_field(g, 2, false, [](const std::array<double, 4>& x) {
    Multivector m(2, false);
    m[BladeIndex{1, WittWord::one}] = x[1];
    return m;
  });
  double cres = -1.0;
  reconstruct_log_phi(curl, &cres);
  CHECK(cres >= 0.15);
  // complex or non-vector input is rejected
  CliffordField bad(g, 2, false);
  for (long long i = 0; i < g.nodes(); ++i) bad.at(0, i) = 1.0;
  CHECK_THROWS_AS(reconstruct_log_phi(bad), std::invalid_argument);
}

TEST_CASE("round-trip through the logarithmic derivative converges at h^2") {
  std::vector<double> err;
  for (int count : {17, 33, 65}) {
    GridSpec g = GridSpec::unit_square(count);
    CliffordField phi = sample_scalar(g, 2, [](const std::array<double, 4>& x) {
      return std::exp(0.1 * x[0] * x[1]);
    });
    CliffordField a = log_derivative(phi);
    CliffordField s = reconstruct_log_phi(a);
    // reference: ln phi, gauged to zero mean with the same quadrature
    CliffordField lnphi = sample_scalar(g, 2, [](const std::array<double, 4>& x) {
      return 0.1 * x[0] * x[1];
    });
    auto w = quad_weights(g);
    double wsum = 0.0, mean = 0.0;
    for (long long i = 0; i < g.nodes(); ++i) {
      wsum += w[i];
      mean += w[i] * lnphi.at(0, i).real();
    }
    mean /= wsum;
    double num = 0.0, den = 0.0;
    for (long long i = 0; i < g.nodes(); ++i) {
      double d = std::abs(s.at(0, i) - (lnphi.at(0, i) - mean));
      num += w[i] * d * d;
      double rv = std::abs(lnphi.at(0, i) - mean);
      den += w[i] * rv * rv;
    }
    err.push_back(std::sqrt(num / den));
  }
  double order = std::log2(err[0] / err[2]) / 2.0;
  CHECK(order > 1.5);
  CHECK(order < 2.5);
}

TEST_CASE("fixed-point and strong residual diagnostics agree with the report") {
  GridSpec g = GridSpec::unit_square(17);
  KernelCache cache = build_kernel_cache(g);
  CliffordField V = sample_scalar(g, 2, [](const std::array<double, 4>& x) {
    return 0.1 * std::sin(kPi * x[0]) * std::sin(kPi * x[1]);
  });
  MiuraConfig cfg;
  cfg.p = 1.5;
  cfg.tol = 1e-12;
  auto [a, rep] = miura_iterate(V, CliffordField(g, 2, false), cfg, cache);
  auto [fp, strong] = miura_residual(a, V, cache, cfg.p);
  CHECK(fp == rep.final_fp_residual);
  CHECK(strong == rep.final_strong_residual);
  CHECK(fp <= 100 * cfg.tol);
}
