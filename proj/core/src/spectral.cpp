#include "jostlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "jostlab/coefficient_ode.hpp"
#include "jostlab/error.hpp"
#include "jostlab/jost.hpp"
#include "jostlab/parallel.hpp"

namespace jostlab {
namespace {

// The square root of E closest to k_previous.
Complex continue_momentum(Complex energy, Complex k_previous) {
  const Complex k = std::sqrt(energy);
  return std::abs(k - k_previous) <= std::abs(k + k_previous) ? k : -k;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

// F_in evaluator bound to a potential and a fixed cutoff.
struct FInEvaluator {
  int l;
  const PotentialSpec& spec;
  double R;
  double ode_tol;

  Complex operator()(Complex energy, Complex k) const {
    const CoefficientState end = transformed_endpoint(l, energy, spec, R, ode_tol);
    const Complex ib = Complex{0.0, 1.0} * ipow(k, 2 * l + 1) * end.b;
    return 0.5 * (end.a - ib);
  }

  Complex on_sheet(Complex energy, Sheet sheet) const {
    return (*this)(energy, RiemannEnergy{energy, sheet}.momentum());
  }
};

void check_region(const EnergyRegion& region, int nx, int ny) {
  if (nx < 2 || ny < 2) throw DomainError("energy grid needs at least 2x2 points");
  if (!(region.re_max > region.re_min) || !(region.im_max > region.im_min)) {
    throw DomainError("energy region is empty");
  }
  const double dx = std::max({region.re_min, 0.0, -region.re_max});
  const double dy = std::max({region.im_min, 0.0, -region.im_max});
  if (std::hypot(dx, dy) <= kThresholdGuard) {
    throw DomainError("energy region touches the threshold E = 0");
  }
}

// Energy of grid node (ix, iy). Points on the real axis are moved to the lip
// facing the region interior so that the sheet momentum is continuous there.
Complex grid_energy(const EnergyRegion& region, int nx, int ny, int ix, int iy) {
  const double re = region.re_min + (region.re_max - region.re_min) * ix / (nx - 1);
  double im = region.im_min + (region.im_max - region.im_min) * iy / (ny - 1);
  if (im == 0.0) im = region.im_max <= 0.0 ? -1e-300 : 1e-300;
  return {re, im};
}

bool same_root(const SpectralRoot& a, const SpectralRoot& b, double tol) {
  const double scale = std::max(1.0, std::abs(a.energy.E));
  return a.energy.sheet == b.energy.sheet && std::abs(a.energy.E - b.energy.E) <= tol * scale;
}

}  // namespace

std::string_view to_string(RootKind kind) {
  switch (kind) {
    case RootKind::bound: return "bound";
    case RootKind::resonance: return "resonance";
    case RootKind::virtual_state: return "virtual";
    case RootKind::unclassified: break;
  }
  return "unclassified";
}

RootKind classify(const RiemannEnergy& energy, double im_tol) {
  const double scale = std::max(1.0, std::abs(energy.E));
  const bool real_axis = std::abs(energy.E.imag()) <= im_tol * scale;
  if (energy.sheet == Sheet::I) {
    return real_axis && energy.E.real() < 0.0 ? RootKind::bound : RootKind::unclassified;
  }
  if (!real_axis) return RootKind::resonance;
  return energy.E.real() < 0.0 ? RootKind::virtual_state : RootKind::unclassified;
}

SpectralRoot refine_zero(const EnergyFunction& f, Sheet sheet, Complex energy_start,
                         const RefineOptions& options) {
  if (energy_start == Complex{}) throw DomainError("refine_zero: start at the branch point");
  if (options.max_iter < 1) throw DomainError("refine_zero: max_iter must be >= 1");

  const Complex k_start = RiemannEnergy{energy_start, sheet}.momentum();
  double f_tol = options.f_tol;
  if (!(f_tol > 0.0)) {
    const double radius = 0.1 * std::max(std::abs(energy_start), 1.0);
    std::vector<double> ring;
    for (int i = 0; i < 8; ++i) {
      const Complex e = energy_start + std::polar(radius, 2.0 * std::numbers::pi * (i + 0.5) / 8.0);
      ring.push_back(std::abs(f(e, continue_momentum(e, k_start))));
    }
    f_tol = 1e-9 * median(ring);
  }

  SpectralRoot root;
  const double guard = 1e-10;
  bool restarted = false;
  Complex energy = energy_start;
  Complex k = k_start;
  Complex value = f(energy, k);
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    root.iterations = iter;
    const double h = 1e-6 * std::max(std::abs(energy), 1.0);
    const Complex fp = f(energy + h, continue_momentum(energy + h, k));
    const Complex fm = f(energy - h, continue_momentum(energy - h, k));
    const Complex derivative = (fp - fm) / (2.0 * h);
    if (derivative == Complex{} || !std::isfinite(std::abs(derivative))) {
      root.diagnostics = "vanishing derivative";
      break;
    }
    Complex step = -value / derivative;
    const double max_step = 0.5 * std::max(std::abs(energy), 1.0);
    if (std::abs(step) > max_step) step *= max_step / std::abs(step);

    const Complex next = energy + step;
    if (std::abs(next) < guard) {
      if (restarted) {
        root.diagnostics = "iteration reached the branch point twice";
        break;
      }
      restarted = true;
      energy = energy_start * (1.0 + 1e-3) + Complex{1e-3, 1e-3} * std::max(1.0, std::abs(energy_start));
      k = continue_momentum(energy, k_start);
      value = f(energy, k);
      continue;
    }
    k = continue_momentum(next, k);
    energy = next;
    value = f(energy, k);
    if (std::abs(step) <= options.tol * std::max(std::abs(energy), 1.0) && std::abs(value) <= f_tol) {
      root.converged = true;
      break;
    }
  }
  if (!root.converged && root.diagnostics.empty()) root.diagnostics = "no convergence within max_iter";
  root.energy = RiemannEnergy::from_momentum(k);
  root.energy.E = energy;
  root.k_at_root = k;
  root.residual = std::abs(value);
  root.kind = classify(root.energy);
  return root;
}

SpectralRoot complex_zero_refine(int l, const PotentialSpec& spec, Sheet sheet, Complex energy_start,
                                 const SpectralOptions& options) {
  const double kappa = 1.5 * std::max(0.0, RiemannEnergy{energy_start, sheet}.momentum().imag());
  const FInEvaluator f_in{l, spec, jost_cutoff(spec, options.ode_tol, kappa), options.ode_tol};
  return refine_zero([&](Complex e, Complex k) { return f_in(e, k); }, sheet, energy_start,
                     {options.root_tol, options.max_iter, options.f_tol});
}

std::vector<SpectralRoot> find_bound_states(int l, const PotentialSpec& spec, double energy_min,
                                            const SpectralOptions& options) {
  if (!(energy_min < 0.0)) throw DomainError("find_bound_states: E_min must be negative");
  const FInEvaluator f_in{l, spec, jost_cutoff(spec, options.ode_tol, std::sqrt(-energy_min)), options.ode_tol};
  auto value = [&](double e) { return f_in.on_sheet({e, 0.0}, Sheet::I).real(); };

  // Geometric grid towards the threshold, merged with a uniform one.
  std::vector<double> grid;
  constexpr int kPerDecade = 25;
  constexpr int kDecades = 8;
  for (int j = 0; j <= kPerDecade * kDecades; ++j) grid.push_back(energy_min * std::pow(10.0, -double(j) / kPerDecade));
  constexpr int kUniform = 100;
  for (int j = 0; j < kUniform; ++j) grid.push_back(energy_min * (1.0 - double(j) / kUniform));
  grid.push_back(0.0);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const std::vector<double> values = parallel_map(grid.size(), [&](std::size_t i) { return value(grid[i]); });
  std::vector<double> magnitudes;
  for (double v : values) magnitudes.push_back(std::abs(v));
  const double f_tol = options.f_tol > 0.0 ? options.f_tol : 1e-9 * median(magnitudes);

  std::vector<std::pair<double, double>> brackets;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    if (grid[i] == 0.0) break;
    if (values[i] == 0.0) brackets.emplace_back(grid[i], grid[i]);
    else if (values[i] * values[i + 1] < 0.0) brackets.emplace_back(grid[i], grid[i + 1]);
  }

  std::vector<SpectralRoot> roots = parallel_map(brackets.size(), [&](std::size_t b) {
    double lo = brackets[b].first;
    double hi = brackets[b].second;
    double f_lo = value(lo);
    auto bisect_to = [&](double rel) {
      while (hi - lo > rel * std::max(std::abs(lo), 1e-12) && lo < hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid == 0.0) break;
        const double f_mid = value(mid);
        if (f_mid == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
          lo = mid;
          f_lo = f_mid;
        } else {
          hi = mid;
        }
      }
    };
    bisect_to(1e-7);
    const double mid = 0.5 * (lo + hi);
    SpectralRoot root = refine_zero([&](Complex e, Complex k) { return f_in(e, k); }, Sheet::I, {mid, 0.0},
                                    {options.root_tol, options.max_iter, f_tol});
    const double e = root.energy.E.real();
    const double width = std::max(hi - lo, 1e-12 * std::abs(mid));
    if (!root.converged || root.energy.sheet != Sheet::I || e < lo - width || e > hi + width) {
      bisect_to(1e-15);
      const double x = 0.5 * (lo + hi);
      const Complex k{0.0, std::sqrt(-x)};
      root.energy = {Complex{x, 0.0}, Sheet::I};
      root.k_at_root = k;
      root.residual = std::abs(f_in({x, 0.0}, k));
      root.converged = root.residual <= f_tol;
      root.diagnostics = root.converged ? "bisection" : "bisection: residual above f_tol";
    }
    root.kind = classify(root.energy);
    return root;
  });
  std::sort(roots.begin(), roots.end(),
            [](const SpectralRoot& a, const SpectralRoot& b) { return a.energy.E.real() < b.energy.E.real(); });
  return roots;
}

ScanGrid pole_scan_grid(int l, const PotentialSpec& spec, const EnergyRegion& region, int nx, int ny, Sheet sheet,
                        double ode_tol) {
  check_region(region, nx, ny);
  const double kappa = max_growth_rate({region.re_min, region.im_min}, {region.re_max, region.im_max}, sheet);
  const FInEvaluator f_in{l, spec, jost_cutoff(spec, ode_tol, kappa), ode_tol};
  ScanGrid grid{nx, ny, sheet, {}};
  grid.samples = parallel_map(static_cast<std::size_t>(nx) * ny, [&](std::size_t idx) {
    const int ix = static_cast<int>(idx % nx);
    const int iy = static_cast<int>(idx / nx);
    const Complex e = grid_energy(region, nx, ny, ix, iy);
    const Complex v = f_in.on_sheet(e, sheet);
    return ScanSample{e, std::abs(v), std::arg(v)};
  });
  return grid;
}

ResonanceSearch find_resonances(int l, const PotentialSpec& spec, const EnergyRegion& region, int nx, int ny,
                                const SpectralOptions& options) {
  const ScanGrid grid = pole_scan_grid(l, spec, region, nx, ny, Sheet::II, options.ode_tol);
  const FInEvaluator f_in{l, spec, jost_cutoff(spec, options.ode_tol, 0.0), options.ode_tol};

  ResonanceSearch out;
  std::vector<double> magnitudes;
  for (const auto& s : grid.samples) magnitudes.push_back(s.abs_f_in);
  out.median_abs_f_in = median(magnitudes);
  const double f_tol = options.f_tol > 0.0 ? options.f_tol : 1e-9 * out.median_abs_f_in;

  std::vector<Complex> starts;
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const double v = grid.at(ix, iy).abs_f_in;
      if (!(v * 10.0 <= out.median_abs_f_in)) continue;
      bool minimum = true;
      for (int dy = -1; dy <= 1 && minimum; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int jx = ix + dx, jy = iy + dy;
          if ((dx == 0 && dy == 0) || jx < 0 || jy < 0 || jx >= nx || jy >= ny) continue;
          if (grid.at(jx, jy).abs_f_in < v) {
            minimum = false;
            break;
          }
        }
      }
      if (minimum) starts.push_back(grid.at(ix, iy).E);
    }
  }
  out.candidates = static_cast<int>(starts.size());

  const std::vector<SpectralRoot> refined = parallel_map(starts.size(), [&](std::size_t i) {
    return refine_zero([&](Complex e, Complex k) { return f_in(e, k); }, Sheet::II, starts[i],
                       {options.root_tol, options.max_iter, f_tol});
  });
  const double margin_x = (region.re_max - region.re_min) / (nx - 1);
  const double margin_y = (region.im_max - region.im_min) / (ny - 1);
  const double dedupe_tol = std::max(100.0 * options.root_tol, 1e-8);
  for (const auto& root : refined) {
    if (!root.converged || root.energy.sheet != Sheet::II) continue;
    const Complex e = root.energy.E;
    if (e.real() < region.re_min - margin_x || e.real() > region.re_max + margin_x ||
        e.imag() < region.im_min - margin_y || e.imag() > region.im_max + margin_y) {
      continue;
    }
    const bool duplicate = std::any_of(out.roots.begin(), out.roots.end(),
                                       [&](const SpectralRoot& r) { return same_root(r, root, dedupe_tol); });
    if (!duplicate) out.roots.push_back(root);
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const SpectralRoot& a, const SpectralRoot& b) {
    return a.energy.E.real() < b.energy.E.real() ||
           (a.energy.E.real() == b.energy.E.real() && a.energy.E.imag() < b.energy.E.imag());
  });

  // Argument principle along the boundary, counter-clockwise.
  std::vector<std::pair<int, int>> loop;
  for (int ix = 0; ix < nx; ++ix) loop.emplace_back(ix, 0);
  for (int iy = 1; iy < ny; ++iy) loop.emplace_back(nx - 1, iy);
  for (int ix = nx - 2; ix >= 0; --ix) loop.emplace_back(ix, ny - 1);
  for (int iy = ny - 2; iy >= 0; --iy) loop.emplace_back(0, iy);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < loop.size(); ++i) {
    const auto& a = grid.at(loop[i].first, loop[i].second);
    const auto& b = grid.at(loop[i + 1].first, loop[i + 1].second);
    total += std::remainder(b.arg_f_in - a.arg_f_in, 2.0 * std::numbers::pi);
  }
  out.winding_number = static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
  out.coarse_grid_warning = out.candidates == 0 && out.winding_number != 0;
  return out;
}

}  // namespace jostlab
