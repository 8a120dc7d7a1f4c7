#pragma once

#include <vector>

#include "jostlab/potentials.hpp"
#include "jostlab/riemann.hpp"
#include "jostlab/special_functions.hpp"

namespace jostlab {

// Which coefficient system a state belongs to: the reduced pair (A~, B~)
// multiplying (j~, y~), or the original (A, B) multiplying (j, y).
enum class Path { transformed, original };

struct CoefficientState {
  Complex a;
  Complex b;
  double r = 0.0;
  Path path = Path::transformed;
};

struct StateDerivative {
  Complex da;
  Complex db;
};

struct WaveValue {
  Complex u;
  Complex du;
};

struct IntegrationOptions {
  // Radii the integrator must land on exactly.
  std::vector<double> landing_points;
  bool keep_states = true;
  // Start radius; <= 0 selects start_radius(spec).
  double r_min = 0.0;
};

struct Trajectory {
  int l = 0;
  RiemannEnergy energy;
  Complex k;  // momentum used by the original path; energy.momentum() otherwise
  Path path = Path::transformed;
  PotentialSpec spec;
  double tol = 0.0;
  std::vector<CoefficientState> states;  // strictly increasing r, last r == R
  double R = 0.0;
  double est_error = 0.0;
  long rhs_evals = 0;

  const CoefficientState& final_state() const { return states.back(); }
};

// max(1e-8, 1e-6 * length scale); r = 0 itself is never sampled.
double start_radius(const PotentialSpec& spec);

// dA~ = -y~ V [j~ A~ - y~ B~],  dB~ = -j~ V [j~ A~ - y~ B~].
StateDerivative transformed_rhs(int l, Complex energy, double r, Complex a, Complex b,
                                const PotentialSpec& spec, double tol = kSeriesTol);

// Same system with the potential value supplied by the caller.
StateDerivative transformed_rhs_at(int l, Complex energy, double r, Complex a, Complex b,
                                   double potential, double tol = kSeriesTol);

// dA = -(y/k) V [j A - y B], dB = -(j/k) V [j A - y B].
StateDerivative original_rhs(int l, Complex k, double r, Complex a, Complex b, double potential);

// Adaptive Dormand-Prince 5(4) from start_radius to R with (A~, B~) = (1, 0).
// Depends on the energy only through E.
Trajectory integrate_transformed(int l, const RiemannEnergy& energy, const PotentialSpec& spec,
                                 double R, double tol, const IntegrationOptions& options = {});

// (A~, B~) at R without keeping the trajectory.
CoefficientState transformed_endpoint(int l, Complex energy, const PotentialSpec& spec, double R,
                                      double tol);

// Original system from (A, B) = (1, 0); requires k != 0.
Trajectory integrate_original(int l, Complex k, const PotentialSpec& spec, double R, double tol,
                              const IntegrationOptions& options = {});

// u = A j - B y and, by the auxiliary condition, du = A j' - B y'. Radii
// between stored states are reached by integrating from the nearest state.
WaveValue reconstruct_wavefunction(const Trajectory& traj, double r);

// max_s |u'' + (E - l(l+1)/r^2 - V) u| / (1 + |u|) with a five-point stencil
// of spacing 1e-3 around sample_count radii inside the trajectory range.
double schrodinger_residual(const Trajectory& traj, const PotentialSpec& spec, int sample_count);

}  // namespace jostlab
