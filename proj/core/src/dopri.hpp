#pragma once

// Dormand-Prince 5(4) with PI step control over a fixed-size complex state.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "jostlab/error.hpp"
#include "jostlab/riemann.hpp"

namespace jostlab::detail {

using State2 = std::array<Complex, 2>;

inline State2 operator+(const State2& a, const State2& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline State2 operator*(double s, const State2& a) { return {s * a[0], s * a[1]}; }

struct StepRecord {
  double r;
  State2 y;
};

struct IntegrationResult {
  std::vector<StepRecord> steps;  // includes the start point
  State2 final_state{};
  double est_error = 0.0;
  long rhs_evals = 0;
};

// Integrates y' = f(r, y, segment_end) from r0 to r1, landing exactly on every
// element of `stops` (sorted, inside (r0, r1)). f receives the end of the
// current segment so it can evaluate one-sided quantities there.
template <class Rhs>
IntegrationResult dormand_prince(Rhs&& f, double r0, State2 y0, double r1, std::span<const double> stops,
                                 double tol, bool keep_steps, double h_init = 0.0) {
  // Butcher tableau.
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  // b - b_hat
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                   e6 = 22.0 / 525, e7 = -1.0 / 40;

  constexpr double kSafety = 0.9;
  constexpr double kAlpha = 0.7 / 5.0;
  constexpr double kBeta = 0.4 / 5.0;
  constexpr double kMinFactor = 0.2;
  constexpr double kMaxFactor = 5.0;
  constexpr long kMaxAttempts = 2'000'000;

  IntegrationResult out;
  if (keep_steps) out.steps.push_back({r0, y0});

  std::vector<double> ends;
  for (double s : stops)
    if (s > r0 && s < r1 && (ends.empty() || s > ends.back())) ends.push_back(s);
  ends.push_back(r1);

  double r = r0;
  State2 y = y0;
  double h = h_init > 0.0 ? h_init : std::max(1e-3 * (r1 - r0), r0 > 0.0 ? r0 : 1e-6);
  double err_prev = 1e-4;
  long attempts = 0;

  for (double seg_end : ends) {
    if (seg_end <= r) continue;
    State2 k1 = f(r, y, seg_end);
    ++out.rhs_evals;
    bool rejected_last = false;
    while (r < seg_end) {
      bool last = false;
      double h_proposed = h;
      if (r + h >= seg_end || (seg_end - r - h) < 1e-10 * h) {
        h = seg_end - r;
        last = true;
      }
      const double min_h = 1e-13 * std::max(1.0, std::abs(r));
      if (++attempts > kMaxAttempts) throw StiffnessError("step budget exhausted", r);
      if (h < min_h && !last) throw StiffnessError("step size underflow", r);

      const State2 k2 = f(r + c2 * h, y + (h * a21) * k1, seg_end);
      const State2 k3 = f(r + c3 * h, y + h * (a31 * k1 + a32 * k2), seg_end);
      const State2 k4 = f(r + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3), seg_end);
      const State2 k5 = f(r + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), seg_end);
      const double r_new = last ? seg_end : r + h;
      const State2 k6 = f(r_new, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), seg_end);
      const State2 y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const State2 k7 = f(r_new, y_new, seg_end);
      out.rhs_evals += 6;

      const State2 err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      double norm = 0.0;
      double abs_err = 0.0;
      for (int i = 0; i < 2; ++i) {
        const double scale = tol * (1.0 + std::max(std::abs(y[i]), std::abs(y_new[i])));
        norm = std::max(norm, std::abs(err[i]) / scale);
        abs_err = std::max(abs_err, std::abs(err[i]));
      }
      if (!std::isfinite(norm)) {
        if (h <= min_h) throw StiffnessError("non-finite right-hand side", r);
        h *= kMinFactor;
        rejected_last = true;
        continue;
      }

      if (norm <= 1.0) {
        r = r_new;
        y = y_new;
        k1 = k7;
        out.est_error += abs_err;
        if (keep_steps) out.steps.push_back({r, y});
        const double n = std::max(norm, 1e-10);
        double factor = kSafety * std::pow(n, -kAlpha) * std::pow(err_prev, kBeta);
        factor = std::clamp(factor, kMinFactor, kMaxFactor);
        if (rejected_last) factor = std::min(factor, 1.0);
        h = last ? std::max(h, h_proposed) : h * factor;
        err_prev = n;
        rejected_last = false;
      } else {
        h *= std::max(kMinFactor, kSafety * std::pow(norm, -0.2));
        rejected_last = true;
        if (h < min_h) throw StiffnessError("step size underflow", r);
      }
    }
  }
  out.final_state = y;
  return out;
}

}  // namespace jostlab::detail
