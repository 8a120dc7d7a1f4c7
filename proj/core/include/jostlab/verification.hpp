#pragma once

#include <span>
#include <string>
#include <vector>

#include "jostlab/potentials.hpp"
#include "jostlab/riemann.hpp"

namespace jostlab {

struct MonodromyReport {
  Complex loop_center;
  double loop_radius = 0.0;
  int n_points = 0;
  bool encloses_origin = false;
  // Largest |(A~, B~)| jump between adjacent samples.
  double max_discontinuity = 0.0;
  // |X(2 pi) - X(0)| combined and per component, with the loop maxima.
  double closure_gap = 0.0;
  double closure_gap_a = 0.0;
  double closure_gap_b = 0.0;
  double max_abs_a = 0.0;
  double max_abs_b = 0.0;
  // Continued momentum at both ends of the loop.
  Complex k_start;
  Complex k_end;
  double k_flip_error = 0.0;    // |k_end + k_start| / |k_start|
  double k_return_error = 0.0;  // |k_end - k_start| / |k_start|
  bool k_flip_verified = false;
  // |F_in(end, continued k) - F_expected| / |F_expected|, where the expected
  // value is F_out(start) around the origin and F_in(start) otherwise.
  double jost_swap_error = 0.0;
};

// E(theta) = center + radius e^(i theta), theta_j = 2 pi j / (n - 1), with k
// continued by the accumulated half angle.
MonodromyReport monodromy_loop(int l, const PotentialSpec& spec, Complex center, double radius, int n_points,
                               double R, double tol);

struct CauchyResult {
  Complex integral;           // trapezoid rule for the loop integral of A~(E, R) dE
  Complex contrast_integral;  // same for k^-(l+1) A~ with k continued
  double max_abs_a = 0.0;
  int n_points = 0;
};

CauchyResult cauchy_residual(int l, const PotentialSpec& spec, Complex center, double radius, int n_points,
                             double R, double tol);

// Phase shift (mod pi, in (-pi/2, pi/2)) from a direct Numerov solution of
// the radial equation, matched at R and a quarter wavelength beyond against
// the standard-library spherical Bessel functions. R must lie outside the
// potential's range. Requires k h <= 0.1.
double numerov_oracle(int l, double energy, const PotentialSpec& spec, double R, double h);

struct SamplePoint {
  Complex E;
  double r;
};

// Worst relative defects over a sample grid.
struct IdentityDefects {
  double wronskian = 0.0;            // j~ y~' - y~ j~' = 1
  double rhs_proportionality = 0.0;  // dA~ j~ = dB~ y~
  double factorization_j = 0.0;      // j = k^(l+1) j~
  double factorization_y = 0.0;      // y = k^-l y~
  double sheet_independence = 0.0;   // reduced pair identical on both sheets
  int points = 0;
};

IdentityDefects identity_suite(int l, const PotentialSpec& spec, std::span<const SamplePoint> grid);

// |E| <= 10 on and off the real axis (plus a near-threshold point), r in [0.1, 20].
std::vector<SamplePoint> standard_identity_grid();

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool at_least = false;  // pass when value >= threshold instead of <=
  bool pass = false;
};

struct VerificationReport {
  std::string potential;
  int l = 0;
  double tol = 0.0;
  // False for potentials singular at the origin; loop and contour checks are
  // then skipped.
  bool certified_class = true;
  std::vector<Check> checks;

  bool all_pass() const;
};

VerificationReport run_verification(int l, const PotentialSpec& spec, double tol);

// {"potential", "l", "tol", "certified_class", "all_pass",
//  "checks": [{"name", "value", "threshold", "comparison", "pass"}]}
std::string to_json(const VerificationReport& report);

}  // namespace jostlab
