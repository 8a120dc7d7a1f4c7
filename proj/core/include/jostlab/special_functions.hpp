#pragma once

#include "jostlab/riemann.hpp"

namespace jostlab {

// Highest angular momentum supported by the recurrences.
inline constexpr int kMaxL = 20;
// |k r| at or below which the reduced power series are used.
inline constexpr double kSeriesSwitch = 10.0;
inline constexpr int kMinSeriesTerms = 3;
inline constexpr int kMaxSeriesTerms = 200;
// Relative truncation target used when callers have no accuracy of their own.
inline constexpr double kSeriesTol = 1e-17;

enum class Regime { series, closed_form };

struct SeriesValue {
  Complex value;
  Complex derivative;  // d/dr
  int terms_used = 0;
};

// Reduced Riccati pair j~_l(E, r) = k^-(l+1) j_l(kr), y~_l(E, r) = k^l y_l(kr)
// with radial derivatives. Depends on E only, never on the sheet.
struct ReducedPair {
  Complex jt;
  Complex yt;
  Complex djt;
  Complex dyt;
  int terms_used = 0;
  Regime regime = Regime::series;
};

// Riccati-Bessel/Neumann values at z = k r plus radial derivatives. The
// Neumann sign is fixed by j dy/dr - y dj/dr = k, i.e. y_0(z) = -cos z.
struct RiccatiValues {
  Complex j;
  Complex y;
  Complex h_plus;   // j + i y ~ (-i)^(l+1) exp(+i k r)
  Complex h_minus;  // j - i y ~ (+i)^(l+1) exp(-i k r)
  Complex dj;       // d/dr j_l(kr)
  Complex dy;
};

// Power series in E; entire for fixed r. r = 0 is allowed and returns 0.
SeriesValue reduced_bessel_series(int l, Complex energy, double r, double tol = kSeriesTol);
// Power series in E with the r^-l singular head; requires r > 0 for l >= 1.
SeriesValue reduced_neumann_series(int l, Complex energy, double r, double tol = kSeriesTol);

inline Complex reduced_bessel(int l, Complex energy, double r, double tol = kSeriesTol) {
  return reduced_bessel_series(l, energy, r, tol).value;
}
inline Complex reduced_neumann(int l, Complex energy, double r, double tol = kSeriesTol) {
  return reduced_neumann_series(l, energy, r, tol).value;
}

// Closed-form trigonometric recurrences in l. For |kr| < max(l, 1) the
// Bessel function is taken from the reduced series instead, where upward
// recurrence would cancel.
RiccatiValues riccati_closed(int l, Complex k, double r);

// Both evaluation paths by hand, for cross-validation.
ReducedPair reduced_pair_series(int l, Complex energy, double r, double tol = kSeriesTol);
ReducedPair reduced_pair_closed(int l, Complex energy, double r);

// Regime dispatcher: series for |kr| <= kSeriesSwitch (always at E = 0),
// closed forms at k = momentum(E, I) otherwise.
ReducedPair reduced_pair(int l, Complex energy, double r, double tol = kSeriesTol);

inline ReducedPair reduced_pair(int l, const RiemannEnergy& energy, double r,
                                double tol = kSeriesTol) {
  return reduced_pair(l, energy.E, r, tol);
}

}  // namespace jostlab
