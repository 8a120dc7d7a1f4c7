#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "jostlab/potentials.hpp"
#include "jostlab/riemann.hpp"

namespace jostlab {

enum class RootKind { bound, resonance, virtual_state, unclassified };

std::string_view to_string(RootKind kind);

struct SpectralRoot {
  RiemannEnergy energy;
  Complex k_at_root;
  RootKind kind = RootKind::unclassified;
  double residual = 0.0;  // |F_in| at the root
  int iterations = 0;
  bool converged = false;
  std::string diagnostics;
};

// Imaginary-part tolerance (relative to max(|E|, 1)) for "on the real axis".
inline constexpr double kRealAxisTol = 1e-8;

// bound: sheet I, real E < 0. resonance: sheet II, Im E != 0 (Im E > 0 is the
// time-reversed partner). virtual: sheet II, real E < 0.
RootKind classify(const RiemannEnergy& energy, double im_tol = kRealAxisTol);

// An energy function evaluated with the momentum continued along the Newton
// path: f(E, k) with k^2 = E.
using EnergyFunction = std::function<Complex(Complex energy, Complex k)>;

struct RefineOptions {
  double tol = 1e-10;     // |dE| <= tol * max(|E|, 1)
  int max_iter = 50;
  double f_tol = 0.0;     // <= 0: 1e-9 * median |f| on a ring around the start
};

// Newton iteration with a central-difference derivative, h = 1e-6 max(|E|, 1).
// k is continued continuously from momentum(E_start, sheet), so iterates may
// cross the cut and the reported sheet is where the root was found. Not
// converging is reported in the result, not thrown.
SpectralRoot refine_zero(const EnergyFunction& f, Sheet sheet, Complex energy_start,
                         const RefineOptions& options = {});

struct SpectralOptions {
  double root_tol = 1e-10;
  double ode_tol = 1e-12;
  int max_iter = 50;
  double f_tol = 0.0;
};

// Newton on F_in(E) for a potential, cutoff from choose_cutoff.
SpectralRoot complex_zero_refine(int l, const PotentialSpec& spec, Sheet sheet, Complex energy_start,
                                 const SpectralOptions& options = {});

// Sheet-I zeros of F_in on [E_min, 0), ascending.
std::vector<SpectralRoot> find_bound_states(int l, const PotentialSpec& spec, double energy_min,
                                            const SpectralOptions& options = {});

struct EnergyRegion {
  double re_min = 0.0;
  double re_max = 0.0;
  double im_min = 0.0;
  double im_max = 0.0;
};

struct ResonanceSearch {
  std::vector<SpectralRoot> roots;  // sorted by Re E
  int candidates = 0;
  int winding_number = 0;           // zeros enclosed by the region boundary
  bool coarse_grid_warning = false; // winding != 0 but no candidate minimum
  double median_abs_f_in = 0.0;
};

// Sheet-II zeros of F_in in `region` from local minima of |F_in| on an
// nx-by-ny grid.
ResonanceSearch find_resonances(int l, const PotentialSpec& spec, const EnergyRegion& region, int nx, int ny,
                                const SpectralOptions& options = {});

struct ScanSample {
  Complex E;
  double abs_f_in;
  double arg_f_in;
};

struct ScanGrid {
  int nx = 0;
  int ny = 0;
  Sheet sheet = Sheet::I;
  std::vector<ScanSample> samples;  // row-major, rows ascend in Im E

  const ScanSample& at(int ix, int iy) const { return samples[static_cast<std::size_t>(iy) * nx + ix]; }
};

// Radius of the disk around E = 0 that grids must avoid.
inline constexpr double kThresholdGuard = 1e-6;

ScanGrid pole_scan_grid(int l, const PotentialSpec& spec, const EnergyRegion& region, int nx, int ny,
                        Sheet sheet, double ode_tol = 1e-10);

}  // namespace jostlab
