#include "jostlab/jost.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "jostlab/error.hpp"
#include "jostlab/parallel.hpp"

namespace jostlab {

JostPair assemble_jost(int l, const RiemannEnergy& energy, Complex a, Complex b, double R, double tail_tol) {
  const Complex k = energy.momentum();
  const Complex ib = Complex{0.0, 1.0} * ipow(k, 2 * l + 1) * b;
  JostPair p;
  p.F_in = 0.5 * (a - ib);
  p.F_out = 0.5 * (a + ib);
  p.k_used = k;
  if (k != Complex{}) {
    const Complex norm = ipow(k, -(l + 1));
    p.f_in = norm * p.F_in;
    p.f_out = norm * p.F_out;
  }
  p.a = a;
  p.b = b;
  p.energy = energy;
  p.l = l;
  p.R = R;
  p.tail_tol = tail_tol;
  return p;
}

bool is_pole(const JostPair& pair) {
  const double scale = std::abs(pair.F_in) + std::abs(pair.F_out);
  return std::abs(pair.F_in) <= std::numeric_limits<double>::min() ||
         std::abs(pair.F_in) <= 4.0 * std::numeric_limits<double>::epsilon() * scale;
}

JostPair jost_pair_at(int l, const RiemannEnergy& energy, const PotentialSpec& spec, double R, double tol) {
  if (energy.E == Complex{}) throw ThresholdError("jost_pair: E = 0 is the branch point");
  if (!(tol > 0.0)) throw DomainError("jost_pair: tol must be positive");
  const CoefficientState end = transformed_endpoint(l, energy.E, spec, R, tol);
  return assemble_jost(l, energy, end.a, end.b, R, tol);
}

double jost_cutoff(const PotentialSpec& spec, double tol, double kappa) {
  const double R = choose_cutoff(spec, tol);
  if (!(kappa > 0.0) || tail_bound(spec, R) == 0.0) return R;
  constexpr double kLogGrowthBudget = 18.420680743952367;  // ln 1e8
  return std::min(R, std::max(spec.length_scale(), 0.5 * kLogGrowthBudget / kappa));
}

double max_growth_rate(Complex corner_lo, Complex corner_hi, Sheet sheet) {
  if (sheet == Sheet::II) return 0.0;
  double rate = 0.0;
  for (double re : {corner_lo.real(), corner_hi.real()}) {
    for (double im : {corner_lo.imag(), corner_hi.imag()}) {
      const Complex e{re, im};
      rate = std::max(rate, std::sqrt(0.5 * std::max(0.0, std::abs(e) - re)));
    }
  }
  return rate;
}

JostPair jost_pair(int l, const RiemannEnergy& energy, const PotentialSpec& spec, double tol) {
  if (energy.E == Complex{}) throw ThresholdError("jost_pair: E = 0 is the branch point");
  const double kappa = std::max(0.0, energy.momentum().imag());
  return jost_pair_at(l, energy, spec, jost_cutoff(spec, tol, kappa), tol);
}

Complex reduced_f_in(int l, const RiemannEnergy& energy, const PotentialSpec& spec, double R, double tol) {
  const CoefficientState end = transformed_endpoint(l, energy.E, spec, R, tol);
  return assemble_jost(l, energy, end.a, end.b, R, tol).F_in;
}

Complex s_matrix(const JostPair& pair) {
  if (is_pole(pair)) throw PoleSignal("s_matrix: F_in vanishes (pole of S)");
  return pair.F_out / pair.F_in;
}

std::vector<PhaseShiftRow> phase_shift_scan(int l, const PotentialSpec& spec, std::span<const double> k_grid,
                                            double tol) {
  if (k_grid.empty()) throw DomainError("phase_shift_scan: empty k grid");
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    if (!(k_grid[i] > 0.0) || (i > 0 && !(k_grid[i] > k_grid[i - 1]))) {
      throw DomainError("phase_shift_scan: k grid must be positive and strictly increasing");
    }
  }
  const double R = choose_cutoff(spec, tol);
  std::vector<PhaseShiftRow> rows = parallel_map(k_grid.size(), [&](std::size_t i) {
    const double k = k_grid[i];
    const RiemannEnergy energy{Complex{k * k, 0.0}, Sheet::I};
    const JostPair pair = jost_pair_at(l, energy, spec, R, tol);
    PhaseShiftRow row{k, k * k, std::numeric_limits<double>::quiet_NaN(),
                      std::numeric_limits<double>::quiet_NaN(), false};
    if (is_pole(pair)) {
      row.pole = true;
      return row;
    }
    const Complex s = s_matrix(pair);
    row.delta = 0.5 * std::arg(s);
    row.abs_S = std::abs(s);
    return row;
  });

  // Unwrap by multiples of pi towards the previous valid row.
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (auto& row : rows) {
    if (row.pole) continue;
    if (std::isfinite(previous)) {
      row.delta += std::numbers::pi * std::round((previous - row.delta) / std::numbers::pi);
    }
    previous = row.delta;
  }
  return rows;
}

}  // namespace jostlab
