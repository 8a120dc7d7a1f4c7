#include <cmath>
#include <numbers>

#include "doctest.h"
#include "jostlab/error.hpp"
#include "jostlab/special_functions.hpp"
#include "oracles.hpp"

using namespace jostlab;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("reduced Bessel series values") {
  CHECK(reduced_bessel(0, 0.0, 2.0).real() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(reduced_bessel(1, 0.0, 3.0).real() == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(reduced_bessel(0, 1.0, std::numbers::pi / 2).real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(reduced_bessel(2, 0.0, 0.0) == Complex{});
}

TEST_CASE("reduced Neumann series values") {
  CHECK(reduced_neumann(0, 0.0, 1.0).real() == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(reduced_neumann(1, 0.0, 2.0).real() == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(reduced_neumann(0, 4.0, std::numbers::pi / 2).real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(reduced_neumann(0, 0.0, 0.0).real() == -1.0);
}

TEST_CASE("reduced series derivatives match finite differences") {
  for (int l = 0; l <= 4; ++l) {
    for (Complex e : {Complex{2.0, 0.0}, Complex{-3.0, 1.5}}) {
      const double r = 1.7, h = 1e-5;
      const SeriesValue j = reduced_bessel_series(l, e, r);
      const SeriesValue y = reduced_neumann_series(l, e, r);
      const Complex dj = (reduced_bessel(l, e, r + h) - reduced_bessel(l, e, r - h)) / (2 * h);
      const Complex dy = (reduced_neumann(l, e, r + h) - reduced_neumann(l, e, r - h)) / (2 * h);
      CHECK(rel(j.derivative, dj) < 1e-8);
      CHECK(rel(y.derivative, dy) < 1e-8);
    }
  }
}

TEST_CASE("series error paths") {
  CHECK_THROWS_AS(reduced_bessel(0, 1.0, -1.0), DomainError);
  CHECK_THROWS_AS(reduced_neumann(1, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(reduced_bessel(kMaxL + 1, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(reduced_bessel(0, 1.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(reduced_bessel(0, 1e8, 10.0), EvaluationError);
  try {
    reduced_bessel_series(0, 1e8, 10.0);
  } catch (const EvaluationError& e) {
    CHECK(e.terms_used() == kMaxSeriesTerms);
  }
}

TEST_CASE("riccati closed forms") {
  const RiccatiValues v = riccati_closed(0, 1.0, std::numbers::pi);
  CHECK(std::abs(v.j) < 1e-15);
  CHECK(v.y.real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(v.h_plus - Complex{0.0, 1.0}) < 1e-15);
  CHECK_THROWS_AS(riccati_closed(0, 0.0, 1.0), DomainError);

  SUBCASE("agreement with the standard library for real arguments") {
    for (int l = 0; l <= 8; ++l) {
      for (double x : {0.3, 1.0, 2.5, 7.0, 15.0, 40.0}) {
        const RiccatiValues c = riccati_closed(l, 1.0, x);
        CHECK(std::abs(c.j.real() - oracle::ric_j(l, x)) <= 1e-12 * std::max(1e-300, std::abs(oracle::ric_j(l, x))) + 1e-300);
        CHECK(std::abs(c.y.real() - oracle::ric_n(l, x)) <= 1e-12 * std::abs(oracle::ric_n(l, x)));
        CHECK(std::abs(c.dj.real() - oracle::ric_dj(l, x)) <= 1e-11 * (std::abs(oracle::ric_dj(l, x)) + std::abs(oracle::ric_j(l, x))));
        CHECK(std::abs(c.dy.real() - oracle::ric_dn(l, x)) <= 1e-11 * (std::abs(oracle::ric_dn(l, x)) + std::abs(oracle::ric_n(l, x))));
      }
    }
  }
}

TEST_CASE("Wronskian j dy - y dj = k") {
  for (int l = 0; l <= 6; ++l) {
    for (Complex k : {Complex{1.0, 0.0}, Complex{0.7, 0.4}, Complex{-2.0, -0.3}, Complex{0.0, 1.5}}) {
      for (double r : {0.4, 1.0, 3.0, 9.0, 20.0}) {
        const RiccatiValues v = riccati_closed(l, k, r);
        const Complex w = v.j * v.dy - v.y * v.dj;
        const double scale = std::max(1.0, std::abs(v.j * v.dy) + std::abs(v.y * v.dj));
        CHECK(std::abs(w - k) <= 1e-10 * std::abs(k) * scale);
      }
    }
  }
}

TEST_CASE("Hankel asymptotics") {
  // s-wave: h+ = -i e^{iz} holds exactly.
  for (double z : {50.0, 80.0, 200.0}) {
    const RiccatiValues v = riccati_closed(0, 1.0, z);
    CHECK(rel(v.h_plus, Complex{0.0, -1.0} * std::exp(Complex{0.0, z})) < 1e-13);
    CHECK(rel(v.h_minus, Complex{0.0, 1.0} * std::exp(Complex{0.0, -z})) < 1e-13);
  }
  // l >= 1: the leading correction is l(l+1)/(2z).
  for (int l = 1; l <= 3; ++l) {
    const Complex phase = std::pow(Complex{0.0, -1.0}, l + 1);
    for (double z : {50.0, 120.0}) {
      const RiccatiValues v = riccati_closed(l, 1.0, z);
      const double dev = rel(v.h_plus, phase * std::exp(Complex{0.0, z}));
      CHECK(dev <= l * (l + 1) / z);
      CHECK(dev >= 0.25 * l * (l + 1) / z);
    }
    const double z = 1e7;
    const RiccatiValues far = riccati_closed(l, 1.0, z);
    CHECK(rel(far.h_plus, phase * std::exp(Complex{0.0, z})) <= 1e-6);
    CHECK(rel(far.h_minus, std::conj(phase) * std::exp(Complex{0.0, -z})) <= 1e-6);
  }
}

TEST_CASE("factorization identities") {
  for (int l = 0; l <= 5; ++l) {
    for (Complex k : {Complex{1.0, 0.0}, Complex{0.8, 0.6}, Complex{0.3, -1.1}, Complex{0.0, 2.0}}) {
      for (double kr : {0.5, 1.0, 3.0, 7.5, 12.0, 20.0}) {
        const double r = kr / std::abs(k);
        const Complex e = k * k;
        const RiccatiValues c = riccati_closed(l, k, r);
        const ReducedPair p = reduced_pair(l, e, r);
        // reduced_pair uses the sheet-I momentum; j (y) is odd (even) in k
        // up to (-1)^l, which ipow accounts for through k^(l+1) and k^-l.
        const Complex k1 = physical_momentum(e);
        const RiccatiValues c1 = riccati_closed(l, k1, r);
        CHECK(rel(ipow(k1, l + 1) * p.jt, c1.j) <= 1e-10);
        CHECK(rel(ipow(k1, -l) * p.yt, c1.y) <= 1e-10);
        CHECK(rel(ipow(k, l + 1) * p.jt, c.j) <= 1e-10);
        CHECK(rel(ipow(k, -l) * p.yt, c.y) <= 1e-10);
      }
    }
  }
}

TEST_CASE("reduced_pair dispatch") {
  const ReducedPair small = reduced_pair(0, 0.01, 0.5);
  CHECK(small.regime == Regime::series);
  CHECK(rel(small.jt, std::sin(0.05) / 0.1) < 1e-14);

  const ReducedPair big = reduced_pair(0, 100.0, 5.0);
  CHECK(big.regime == Regime::closed_form);
  CHECK(rel(big.jt, std::sin(50.0) / 10.0) < 1e-14);

  const ReducedPair at_zero = reduced_pair(2, 0.0, 50.0);
  CHECK(at_zero.regime == Regime::series);
  CHECK_THROWS_AS(reduced_pair_closed(0, 0.0, 1.0), ThresholdError);

  const ReducedPair s = reduced_pair_series(3, 2.0, 3.0);
  const ReducedPair c = reduced_pair_closed(3, 2.0, 3.0);
  CHECK(rel(s.jt, c.jt) < 1e-10);
  CHECK(rel(s.yt, c.yt) < 1e-10);
  CHECK(rel(s.djt, c.djt) < 1e-10);
  CHECK(rel(s.dyt, c.dyt) < 1e-10);
}

TEST_CASE("series and closed forms agree across the switch") {
  for (int l = 0; l <= 4; ++l) {
    for (Complex e : {Complex{81.0, 0.0}, Complex{-60.0, 20.0}, Complex{0.0, 100.0}}) {
      const double r = 1.05;
      const ReducedPair s = reduced_pair_series(l, e, r);
      const ReducedPair c = reduced_pair_closed(l, e, r);
      CHECK(std::abs(s.jt - c.jt) <= 1e-9 * (std::abs(c.jt) + std::abs(c.jt * c.dyt)));
      CHECK(rel(s.yt, c.yt) <= 1e-9);
    }
  }
}

TEST_CASE("reduced Wronskian") {
  for (int l = 0; l <= 3; ++l) {
    for (Complex e : {Complex{1e-8, 0.0}, Complex{0.5, 0.0}, Complex{-10.0, 0.0}, Complex{2.0, 1.0}, Complex{0.0, -10.0}}) {
      for (double r : {0.1, 1.0, 5.0, 20.0}) {
        const ReducedPair p = reduced_pair(l, e, r);
        const Complex w1 = p.jt * p.dyt, w2 = p.yt * p.djt;
        CHECK(std::abs(w1 - w2 - 1.0) <= 1e-10 * std::max(1.0, std::abs(w1) + std::abs(w2)));
      }
    }
  }
}

TEST_CASE("sheet independence is bit exact") {
  for (Complex e : {Complex{2.0, 0.0}, Complex{-1.0, 0.0}, Complex{3.0, -4.0}, Complex{200.0, 1.0}}) {
    const ReducedPair a = reduced_pair(2, RiemannEnergy{e, Sheet::I}, 2.0);
    const ReducedPair b = reduced_pair(2, RiemannEnergy{e, Sheet::II}, 2.0);
    CHECK(a.jt == b.jt);
    CHECK(a.yt == b.yt);
    CHECK(a.djt == b.djt);
    CHECK(a.dyt == b.dyt);
  }
}

TEST_CASE("series converge for large |E|") {
  for (Complex e : {Complex{1e4, 0.0}, Complex{-1e4, 0.0}, Complex{0.0, 1e4}, Complex{7e3, -7e3}}) {
    for (int l : {0, 3, 10}) {
      const SeriesValue j = reduced_bessel_series(l, e, 1.0);
      const SeriesValue y = reduced_neumann_series(l, e, 1.0);
      CHECK(j.terms_used < kMaxSeriesTerms);
      CHECK(y.terms_used < kMaxSeriesTerms);
      CHECK(std::isfinite(std::abs(j.value)));
    }
  }
}

TEST_CASE("momentum conventions") {
  for (Complex e : {Complex{4.0, 0.0}, Complex{-4.0, 0.0}, Complex{1.0, -1e-12}, Complex{-3.0, 2.0}}) {
    const Complex k1 = RiemannEnergy{e, Sheet::I}.momentum();
    const Complex k2 = RiemannEnergy{e, Sheet::II}.momentum();
    CHECK(k1.imag() >= 0.0);
    CHECK(k2 == -k1);
    CHECK(std::abs(k1 * k1 - e) <= 1e-15 * std::abs(e));
  }
  CHECK(RiemannEnergy{4.0, Sheet::I}.momentum() == Complex{2.0, 0.0});
  CHECK(RiemannEnergy::from_momentum({0.0, 1.0}).sheet == Sheet::I);
  CHECK(RiemannEnergy::from_momentum({0.0, -1.0}).sheet == Sheet::II);
  CHECK(RiemannEnergy::from_momentum({-2.0, 0.0}).sheet == Sheet::II);
}
