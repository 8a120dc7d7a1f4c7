#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace jostlab {

// V(r) = -depth for r < radius, 0 beyond.
struct SquareWell {
  double depth;
  double radius;
};

// V(r) = strength * exp(-r / range).
struct Exponential {
  double strength;
  double range;
};

// V(r) = strength * exp(-(r / width)^2).
struct Gaussian {
  double strength;
  double width;
};

// V(r) = strength * exp(-screening r) / r. Singular at the origin.
struct Yukawa {
  double strength;
  double screening;
};

// Samples (r_i, V_i) joined by a monotone piecewise cubic (Fritsch-Carlson).
// Constant V_0 below the first sample, zero beyond the last.
class Tabulated {
 public:
  Tabulated(std::vector<double> r, std::vector<double> v);

  const std::vector<double>& radii() const { return data_->r; }
  const std::vector<double>& values() const { return data_->v; }
  double operator()(double r) const;

 private:
  struct Data {
    std::vector<double> r, v, slope;
  };
  std::shared_ptr<const Data> data_;
};

using PotentialKind = std::variant<SquareWell, Exponential, Gaussian, Yukawa, Tabulated>;

// A short-range central potential in scaled units (V already carries
// 2 mu / hbar^2, times the user-supplied scale). Immutable; cheap to copy.
class PotentialSpec {
 public:
  explicit PotentialSpec(PotentialKind kind, double scale = 1.0);

  // The identically vanishing potential.
  static PotentialSpec free() { return PotentialSpec(SquareWell{0.0, 1.0}); }

  const PotentialKind& kind() const { return kind_; }
  double scale() const { return scale_; }
  std::string_view kind_name() const;

  // scale * V(r). Throws DomainError for r < 0, and at r = 0 for Yukawa.
  double operator()(double r) const;
  double evaluate(double r) const { return (*this)(r); }

  bool is_zero() const;
  bool is_singular_at_origin() const { return std::holds_alternative<Yukawa>(kind_); }

  // Characteristic length: well radius, range, width, 1/screening, or the
  // last tabulated radius.
  double length_scale() const;

  // Radii where V or its low derivatives jump; integrators land on them.
  std::vector<double> breakpoints() const;

 private:
  PotentialKind kind_;
  double scale_;
};

// Upper bound on the integral of |V(r)| (1 + r) over [R, inf).
double tail_bound(const PotentialSpec& spec, double R);

// Smallest R on the grid {n * L / 4} with tail_bound(R) <= tol, clamped to
// [L / 4, max(1000 L, 100)]. Throws CutoffError when no grid point qualifies.
double choose_cutoff(const PotentialSpec& spec, double tol);

// Line-oriented key=value configuration. `base_dir` resolves relative
// `file=` entries of tabulated potentials.
PotentialSpec parse_spec(std::string_view text, const std::filesystem::path& base_dir = {});
PotentialSpec load_spec(const std::filesystem::path& path);

// Two-column CSV "r,V" with an optional header row.
Tabulated parse_table(std::string_view csv_text);

}  // namespace jostlab
