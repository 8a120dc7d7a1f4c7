#include "jostlab/special_functions.hpp"

#include <cmath>
#include <string>

#include "jostlab/error.hpp"

namespace jostlab {
namespace {

void check_l(int l) {
  if (l < 0 || l > kMaxL) {
    throw DomainError("angular momentum l=" + std::to_string(l) + " outside [0, " +
                      std::to_string(kMaxL) + "]");
  }
}

// (2l+1)!! as a double; exact for l <= 20.
double double_factorial_odd(int l) {
  double result = 1.0;
  for (int m = 3; m <= 2 * l + 1; m += 2) result *= m;
  return result;
}

// Generic driver for sum_n t_n with t_{n+1} = t_n * x / ((n+1)(n + shift)),
// where x = -E (r/2)^2 and term n carries the radial power (2n + p0).
SeriesValue sum_reduced_series(Complex head, Complex x, double shift, int p0, double r,
                               double tol, const char* name) {
  SeriesValue out;
  Complex term = head;
  Complex sum{};
  Complex dsum{};
  int small_in_a_row = 0;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    sum += term;
    if (r > 0.0) dsum += term * (static_cast<double>(2 * n + p0) / r);
    out.terms_used = n + 1;
    if (std::abs(term) <= tol * std::abs(sum)) {
      ++small_in_a_row;
    } else {
      small_in_a_row = 0;
    }
    if (out.terms_used >= kMinSeriesTerms && small_in_a_row >= 2) {
      out.value = sum;
      out.derivative = dsum;
      return out;
    }
    term *= x / ((n + 1.0) * (n + shift));
  }
  throw EvaluationError(std::string(name) + ": series did not converge within " +
                            std::to_string(kMaxSeriesTerms) + " terms (|x|=" +
                            std::to_string(std::abs(x)) + ")",
                        out.terms_used);
}

}  // namespace

SeriesValue reduced_bessel_series(int l, Complex energy, double r, double tol) {
  check_l(l);
  if (!(r >= 0.0)) throw DomainError("reduced_bessel: r must be non-negative");
  if (!(tol > 0.0)) throw DomainError("reduced_bessel: tol must be positive");
  if (r == 0.0) return {Complex{}, l == 0 ? Complex{1.0} : Complex{}, 1};
  // n = 0 term: sqrt(pi)/Gamma(l+3/2) (r/2)^(l+1) = r^(l+1)/(2l+1)!!
  const Complex head = std::pow(r, l + 1) / double_factorial_odd(l);
  const Complex x = -energy * (0.25 * r * r);
  return sum_reduced_series(head, x, l + 1.5, l + 1, r, tol, "reduced_bessel");
}

SeriesValue reduced_neumann_series(int l, Complex energy, double r, double tol) {
  check_l(l);
  if (!(tol > 0.0)) throw DomainError("reduced_neumann: tol must be positive");
  if (!(r > 0.0)) {
    if (l >= 1 || r < 0.0) throw DomainError("reduced_neumann: r must be positive");
    return {Complex{-1.0}, Complex{}, 1};
  }
  // n = 0 term: (-1)^(l+1) sqrt(pi)/Gamma(1/2-l) (r/2)^-l = -(2l-1)!!/r^l
  const Complex head = -double_factorial_odd(l - 1) / std::pow(r, l);
  const Complex x = -energy * (0.25 * r * r);
  return sum_reduced_series(head, x, 0.5 - l, -l, r, tol, "reduced_neumann");
}

RiccatiValues riccati_closed(int l, Complex k, double r) {
  check_l(l);
  if (k == Complex{}) throw DomainError("riccati_closed: k = 0, use the reduced functions");
  if (!(r > 0.0)) throw DomainError("riccati_closed: r must be positive");
  const Complex z = k * r;

  // Upward recurrence f_{m+1} = (2m+1)/z f_m - f_{m-1}, seeded at m = -1, 0.
  Complex y_prev = std::sin(z);
  Complex y_cur = -std::cos(z);
  Complex j_prev = std::cos(z);
  Complex j_cur = std::sin(z);
  for (int m = 0; m < l; ++m) {
    const Complex factor = (2.0 * m + 1.0) / z;
    const Complex y_next = factor * y_cur - y_prev;
    const Complex j_next = factor * j_cur - j_prev;
    y_prev = y_cur;
    y_cur = y_next;
    j_prev = j_cur;
    j_cur = j_next;
  }

  RiccatiValues out;
  out.y = y_cur;
  out.dy = k * (y_prev - (static_cast<double>(l) / z) * y_cur);
  if (l >= 1 && std::abs(z) < std::max(1.0, static_cast<double>(l))) {
    const Complex kl1 = ipow(k, l + 1);
    const SeriesValue s = reduced_bessel_series(l, k * k, r);
    out.j = kl1 * s.value;
    out.dj = kl1 * s.derivative;
  } else {
    out.j = j_cur;
    out.dj = k * (j_prev - (static_cast<double>(l) / z) * j_cur);
  }
  const Complex i{0.0, 1.0};
  out.h_plus = out.j + i * out.y;
  out.h_minus = out.j - i * out.y;
  return out;
}

ReducedPair reduced_pair_series(int l, Complex energy, double r, double tol) {
  if (!(r > 0.0)) throw DomainError("reduced_pair: r must be positive");
  const SeriesValue js = reduced_bessel_series(l, energy, r, tol);
  const SeriesValue ys = reduced_neumann_series(l, energy, r, tol);
  return {js.value, ys.value, js.derivative, ys.derivative, js.terms_used + ys.terms_used,
          Regime::series};
}

ReducedPair reduced_pair_closed(int l, Complex energy, double r) {
  if (energy == Complex{}) throw ThresholdError("reduced_pair_closed: E = 0");
  const Complex k = physical_momentum(energy);
  const RiccatiValues v = riccati_closed(l, k, r);
  const Complex kl1 = ipow(k, l + 1);
  const Complex kl = ipow(k, l);
  return {v.j / kl1, v.y * kl, v.dj / kl1, v.dy * kl, 0, Regime::closed_form};
}

ReducedPair reduced_pair(int l, Complex energy, double r, double tol) {
  if (!(r > 0.0)) throw DomainError("reduced_pair: r must be positive");
  if (!(tol > 0.0)) throw DomainError("reduced_pair: tol must be positive");
  if (energy == Complex{} || std::sqrt(std::abs(energy)) * r <= kSeriesSwitch) {
    return reduced_pair_series(l, energy, r, tol);
  }
  return reduced_pair_closed(l, energy, r);
}

}  // namespace jostlab
