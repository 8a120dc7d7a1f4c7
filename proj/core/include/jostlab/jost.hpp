#pragma once

#include <span>
#include <vector>

#include "jostlab/coefficient_ode.hpp"
#include "jostlab/potentials.hpp"
#include "jostlab/riemann.hpp"

namespace jostlab {

// Jost values at the cutoff radius R. With (A~, B~) the transformed
// coefficients at R and K = k^(2l+1):
//   F_in  = (A~ - i K B~) / 2   multiplies the incoming wave h^-
//   F_out = (A~ + i K B~) / 2   multiplies the outgoing wave h^+
// and f_in/out = k^-(l+1) F_in/out in the working normalization.
struct JostPair {
  Complex f_in;
  Complex f_out;
  Complex F_in;
  Complex F_out;
  Complex k_used;
  Complex a;  // A~(R)
  Complex b;  // B~(R)
  RiemannEnergy energy;
  int l = 0;
  double R = 0.0;
  double tail_tol = 0.0;
};

// Pure algebra from coefficients at R and the momentum to attach.
JostPair assemble_jost(int l, const RiemannEnergy& energy, Complex a, Complex b, double R, double tail_tol);

// Guard used by s_matrix: F_in is indistinguishable from zero.
bool is_pole(const JostPair& pair);

// Cutoff for energies whose momentum has Im k <= kappa. Starts from
// choose_cutoff(spec, tol) and, for potentials without compact support, caps
// R so that the growing solution stays within exp(2 kappa R) <= 1e8 of the
// decaying one. Past that point F_in drowns in F_out and the transformed
// system stalls the integrator.
double jost_cutoff(const PotentialSpec& spec, double tol, double kappa);

// Largest Im k over a rectangle of energies on one sheet (0 on sheet II).
double max_growth_rate(Complex corner_lo, Complex corner_hi, Sheet sheet);

// Integrates to R = jost_cutoff(spec, tol, Im k). Throws ThresholdError at E = 0.
JostPair jost_pair(int l, const RiemannEnergy& energy, const PotentialSpec& spec, double tol);
// Same with an explicit cutoff radius.
JostPair jost_pair_at(int l, const RiemannEnergy& energy, const PotentialSpec& spec, double R, double tol);

// (A~ - i k^(2l+1) B~)/2 at R; defined at the threshold E = 0 as well.
Complex reduced_f_in(int l, const RiemannEnergy& energy, const PotentialSpec& spec, double R, double tol);

// F_out / F_in. Throws PoleSignal when is_pole(pair).
Complex s_matrix(const JostPair& pair);

struct PhaseShiftRow {
  double k;
  double E;
  double delta;  // arg(S)/2, continuously unwrapped along the grid
  double abs_S;
  bool pole = false;
};

std::vector<PhaseShiftRow> phase_shift_scan(int l, const PotentialSpec& spec, std::span<const double> k_grid,
                                            double tol);

}  // namespace jostlab
