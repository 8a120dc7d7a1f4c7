#include "jostlab/coefficient_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dopri.hpp"
#include "jostlab/error.hpp"

namespace jostlab {
namespace {

using detail::State2;

// V on the open segment ending at seg_end, so that a jump located exactly at
// seg_end is seen from the left.
double potential_in_segment(const PotentialSpec& spec, double r, double seg_end) {
  if (r >= seg_end) r = std::nextafter(seg_end, -std::numeric_limits<double>::infinity());
  return spec(r);
}

std::vector<double> merged_stops(const PotentialSpec& spec, const std::vector<double>& extra) {
  std::vector<double> stops = spec.breakpoints();
  stops.insert(stops.end(), extra.begin(), extra.end());
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  return stops;
}

detail::IntegrationResult run_path(int l, Path path, Complex energy, Complex k, const PotentialSpec& spec,
                                   double r0, State2 y0, double r1, const std::vector<double>& stops,
                                   double tol, bool keep, double h_init = 0.0) {
  if (path == Path::transformed) {
    auto rhs = [&](double r, const State2& y, double seg_end) -> State2 {
      const StateDerivative d =
          transformed_rhs_at(l, energy, r, y[0], y[1], potential_in_segment(spec, r, seg_end));
      return {d.da, d.db};
    };
    return detail::dormand_prince(rhs, r0, y0, r1, stops, tol, keep, h_init);
  }
  auto rhs = [&](double r, const State2& y, double seg_end) -> State2 {
    const StateDerivative d = original_rhs(l, k, r, y[0], y[1], potential_in_segment(spec, r, seg_end));
    return {d.da, d.db};
  };
  return detail::dormand_prince(rhs, r0, y0, r1, stops, tol, keep, h_init);
}

void check_integration_args(int l, double R, double tol, double r_min) {
  if (l < 0 || l > kMaxL) throw DomainError("integrate: l out of range");
  if (!(tol > 0.0)) throw DomainError("integrate: tol must be positive");
  if (!(R > r_min)) throw DomainError("integrate: cutoff R must exceed the start radius");
}

Trajectory make_trajectory(int l, const RiemannEnergy& energy, Complex k, Path path,
                           const PotentialSpec& spec, double R, double tol,
                           const IntegrationOptions& options) {
  const double r_min = options.r_min > 0.0 ? options.r_min : start_radius(spec);
  check_integration_args(l, R, tol, r_min);
  const auto result = run_path(l, path, energy.E, k, spec, r_min, {Complex{1.0}, Complex{}}, R,
                               merged_stops(spec, options.landing_points), tol, true);
  Trajectory traj{l, energy, k, path, spec, tol, {}, R, result.est_error, result.rhs_evals};
  traj.states.reserve(result.steps.size());
  for (const auto& s : result.steps) traj.states.push_back({s.y[0], s.y[1], s.r, path});
  if (!options.keep_states) traj.states = {traj.states.front(), traj.states.back()};
  return traj;
}

WaveValue combine(const Trajectory& traj, double r, Complex a, Complex b) {
  if (traj.path == Path::transformed) {
    const ReducedPair p = reduced_pair(traj.l, traj.energy.E, r);
    return {a * p.jt - b * p.yt, a * p.djt - b * p.dyt};
  }
  const RiccatiValues v = riccati_closed(traj.l, traj.k, r);
  return {a * v.j - b * v.y, a * v.dj - b * v.dy};
}

}  // namespace

double start_radius(const PotentialSpec& spec) {
  const double length = spec.length_scale();
  return std::isfinite(length) ? std::max(1e-8, 1e-6 * length) : 1e-8;
}

StateDerivative transformed_rhs_at(int l, Complex energy, double r, Complex a, Complex b,
                                   double potential, double tol) {
  if (!(r > 0.0)) throw DomainError("transformed_rhs: r must be positive");
  if (potential == 0.0) return {};
  const ReducedPair p = reduced_pair(l, energy, r, tol);
  const Complex vu = potential * (p.jt * a - p.yt * b);
  return {-p.yt * vu, -p.jt * vu};
}

StateDerivative transformed_rhs(int l, Complex energy, double r, Complex a, Complex b,
                                const PotentialSpec& spec, double tol) {
  return transformed_rhs_at(l, energy, r, a, b, spec(r), tol);
}

StateDerivative original_rhs(int l, Complex k, double r, Complex a, Complex b, double potential) {
  if (potential == 0.0) return {};
  const RiccatiValues v = riccati_closed(l, k, r);
  const Complex vu = potential * (v.j * a - v.y * b);
  return {-(v.y / k) * vu, -(v.j / k) * vu};
}

Trajectory integrate_transformed(int l, const RiemannEnergy& energy, const PotentialSpec& spec, double R,
                                 double tol, const IntegrationOptions& options) {
  return make_trajectory(l, energy, energy.momentum(), Path::transformed, spec, R, tol, options);
}

CoefficientState transformed_endpoint(int l, Complex energy, const PotentialSpec& spec, double R,
                                      double tol) {
  const double r_min = start_radius(spec);
  check_integration_args(l, R, tol, r_min);
  const auto result = run_path(l, Path::transformed, energy, Complex{}, spec, r_min,
                               {Complex{1.0}, Complex{}}, R, spec.breakpoints(), tol, false);
  return {result.final_state[0], result.final_state[1], R, Path::transformed};
}

Trajectory integrate_original(int l, Complex k, const PotentialSpec& spec, double R, double tol,
                              const IntegrationOptions& options) {
  if (k == Complex{}) throw DomainError("integrate_original: k = 0");
  return make_trajectory(l, RiemannEnergy::from_momentum(k), k, Path::original, spec, R, tol, options);
}

WaveValue reconstruct_wavefunction(const Trajectory& traj, double r) {
  if (traj.states.empty() || r < traj.states.front().r || r > traj.R) {
    throw DomainError("reconstruct_wavefunction: r outside the trajectory range");
  }
  auto it = std::upper_bound(traj.states.begin(), traj.states.end(), r,
                             [](double x, const CoefficientState& s) { return x < s.r; });
  const CoefficientState& node = *std::prev(it);
  if (node.r == r) return combine(traj, r, node.a, node.b);
  const auto result = run_path(traj.l, traj.path, traj.energy.E, traj.k, traj.spec, node.r,
                               {node.a, node.b}, r, traj.spec.breakpoints(), traj.tol, false, r - node.r);
  return combine(traj, r, result.final_state[0], result.final_state[1]);
}

double schrodinger_residual(const Trajectory& traj, const PotentialSpec& spec, int sample_count) {
  if (sample_count < 3) throw DomainError("schrodinger_residual: need at least 3 samples");
  const double length = spec.length_scale();
  const double h = 1e-3 * (std::isfinite(length) ? std::min(1.0, length) : 1.0);
  const double r_front = traj.states.front().r;
  const double lo = std::max({r_front + 4.0 * h, 10.0 * h, 0.01 * (traj.R - r_front)});
  const double hi = traj.R - 4.0 * h;
  if (!(hi > lo)) throw DomainError("schrodinger_residual: trajectory range too short");

  std::vector<double> breaks = spec.breakpoints();
  for (double bp : traj.spec.breakpoints()) breaks.push_back(bp);
  std::vector<double> centers;
  for (int s = 0; s < sample_count; ++s) {
    double c = lo + (s + 0.5) * (hi - lo) / sample_count;
    for (double bp : breaks) {
      if (std::abs(c - bp) < 3.0 * h) c = (bp + 3.0 * h < hi) ? bp + 3.0 * h : bp - 3.0 * h;
    }
    centers.push_back(c);
  }
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end(),
                            [h](double x, double y) { return y - x < 5.0 * h; }),
                centers.end());

  IntegrationOptions options;
  options.r_min = r_front;
  for (double c : centers)
    for (int m = -2; m <= 2; ++m) options.landing_points.push_back(c + m * h);
  const Trajectory dense = traj.path == Path::transformed
                               ? integrate_transformed(traj.l, traj.energy, traj.spec, traj.R, traj.tol, options)
                               : integrate_original(traj.l, traj.k, traj.spec, traj.R, traj.tol, options);

  auto u_at = [&](double r) {
    auto it = std::lower_bound(dense.states.begin(), dense.states.end(), r,
                               [](const CoefficientState& s, double x) { return s.r < x; });
    if (it == dense.states.end() || it->r != r) return reconstruct_wavefunction(dense, r).u;
    return combine(dense, r, it->a, it->b).u;
  };

  const Complex e_complex = traj.path == Path::transformed ? traj.energy.E : traj.k * traj.k;
  const double centrifugal = traj.l * (traj.l + 1.0);
  double worst = 0.0;
  for (double c : centers) {
    const Complex u_m2 = u_at(c - 2 * h), u_m1 = u_at(c - h), u_0 = u_at(c), u_p1 = u_at(c + h),
                  u_p2 = u_at(c + 2 * h);
    const Complex d2 = (-u_p2 + 16.0 * u_p1 - 30.0 * u_0 + 16.0 * u_m1 - u_m2) / (12.0 * h * h);
    const Complex residual = d2 + (e_complex - centrifugal / (c * c) - spec(c)) * u_0;
    worst = std::max(worst, std::abs(residual) / (1.0 + std::abs(u_0)));
  }
  return worst;
}

}  // namespace jostlab
