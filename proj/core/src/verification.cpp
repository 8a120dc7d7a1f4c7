#include "jostlab/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "jostlab/coefficient_ode.hpp"
#include "jostlab/error.hpp"
#include "jostlab/jost.hpp"
#include "jostlab/parallel.hpp"
#include "jostlab/special_functions.hpp"

namespace jostlab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct LoopSample {
  Complex E;
  Complex k;
  Complex a;
  Complex b;
};

// Samples of (A~, B~)(E, R) on a circle, with the momentum continued by the
// accumulated half angle from momentum(E(0), I).
std::vector<LoopSample> sample_loop(int l, const PotentialSpec& spec, Complex center, double radius,
                                    const std::vector<double>& angles, double R, double tol) {
  std::vector<LoopSample> samples(angles.size());
  for (std::size_t j = 0; j < angles.size(); ++j) samples[j].E = center + std::polar(radius, angles[j]);
  if (std::abs(samples.front().E) == 0.0) throw DomainError("loop sample at E = 0");

  double half_angle = std::arg(RiemannEnergy{samples.front().E, Sheet::I}.momentum());
  for (std::size_t j = 0; j < samples.size(); ++j) {
    if (j > 0) half_angle += 0.5 * std::arg(samples[j].E / samples[j - 1].E);
    samples[j].k = std::polar(std::sqrt(std::abs(samples[j].E)), half_angle);
  }
  const auto ends = parallel_map(samples.size(), [&](std::size_t j) {
    return transformed_endpoint(l, samples[j].E, spec, R, tol);
  });
  for (std::size_t j = 0; j < samples.size(); ++j) {
    samples[j].a = ends[j].a;
    samples[j].b = ends[j].b;
  }
  return samples;
}

void check_loop(Complex center, double radius, int n_points, int min_points) {
  if (!(radius > 0.0)) throw DomainError("loop radius must be positive");
  if (n_points < min_points) throw DomainError("loop needs at least " + std::to_string(min_points) + " points");
  if (std::abs(std::abs(center) - radius) <= 1e-6) throw DomainError("loop passes through the threshold E = 0");
}

Complex f_in_of(int l, Complex k, Complex a, Complex b) {
  return 0.5 * (a - Complex{0.0, 1.0} * ipow(k, 2 * l + 1) * b);
}
Complex f_out_of(int l, Complex k, Complex a, Complex b) {
  return 0.5 * (a + Complex{0.0, 1.0} * ipow(k, 2 * l + 1) * b);
}

// Sheet-I potential value, averaging the two sides at a jump.
double potential_at_node(const PotentialSpec& spec, double r, const std::vector<double>& breaks) {
  if (std::find(breaks.begin(), breaks.end(), r) != breaks.end()) {
    const double left = spec(std::nextafter(r, 0.0));
    const double right = spec(std::nextafter(r, 2.0 * r));
    return 0.5 * (left + right);
  }
  return spec(r);
}

double phase_mod_pi(double x) { return x - std::numbers::pi * std::round(x / std::numbers::pi); }

}  // namespace

MonodromyReport monodromy_loop(int l, const PotentialSpec& spec, Complex center, double radius, int n_points,
                               double R, double tol) {
  check_loop(center, radius, n_points, 16);
  std::vector<double> angles(n_points);
  for (int j = 0; j < n_points; ++j) angles[j] = kTwoPi * j / (n_points - 1);
  const auto samples = sample_loop(l, spec, center, radius, angles, R, tol);

  MonodromyReport rep;
  rep.loop_center = center;
  rep.loop_radius = radius;
  rep.n_points = n_points;
  rep.encloses_origin = std::abs(center) < radius;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    rep.max_abs_a = std::max(rep.max_abs_a, std::abs(samples[j].a));
    rep.max_abs_b = std::max(rep.max_abs_b, std::abs(samples[j].b));
    if (j > 0) {
      const double jump = std::hypot(std::abs(samples[j].a - samples[j - 1].a), std::abs(samples[j].b - samples[j - 1].b));
      rep.max_discontinuity = std::max(rep.max_discontinuity, jump);
    }
  }
  const LoopSample& first = samples.front();
  const LoopSample& last = samples.back();
  rep.closure_gap_a = std::abs(last.a - first.a);
  rep.closure_gap_b = std::abs(last.b - first.b);
  rep.closure_gap = std::hypot(rep.closure_gap_a, rep.closure_gap_b);
  rep.k_start = first.k;
  rep.k_end = last.k;
  rep.k_flip_error = std::abs(last.k + first.k) / std::abs(first.k);
  rep.k_return_error = std::abs(last.k - first.k) / std::abs(first.k);
  rep.k_flip_verified = rep.k_flip_error <= 1e-12;

  const Complex end_in = f_in_of(l, last.k, last.a, last.b);
  const Complex expected = rep.encloses_origin ? f_out_of(l, first.k, first.a, first.b)
                                               : f_in_of(l, first.k, first.a, first.b);
  rep.jost_swap_error = std::abs(end_in - expected) / std::abs(expected);
  return rep;
}

CauchyResult cauchy_residual(int l, const PotentialSpec& spec, Complex center, double radius, int n_points,
                             double R, double tol) {
  check_loop(center, radius, n_points, 8);
  std::vector<double> angles(n_points);
  for (int j = 0; j < n_points; ++j) angles[j] = kTwoPi * j / n_points;
  const auto samples = sample_loop(l, spec, center, radius, angles, R, tol);

  CauchyResult out;
  out.n_points = n_points;
  const double weight = kTwoPi / n_points;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const Complex dE = Complex{0.0, radius} * std::polar(1.0, angles[j]) * weight;
    out.integral += samples[j].a * dE;
    out.contrast_integral += ipow(samples[j].k, -(l + 1)) * samples[j].a * dE;
    out.max_abs_a = std::max(out.max_abs_a, std::abs(samples[j].a));
  }
  return out;
}

double numerov_oracle(int l, double energy, const PotentialSpec& spec, double R, double h) {
  if (l < 0 || l > kMaxL) throw DomainError("numerov_oracle: l out of range");
  if (!(energy > 0.0)) throw DomainError("numerov_oracle: E must be positive");
  if (!(h > 0.0) || !(R > 0.0)) throw DomainError("numerov_oracle: need h > 0 and R > 0");
  const double k = std::sqrt(energy);
  if (k * h > 0.1 + 1e-12) throw DomainError("numerov_oracle: step too coarse (k h > 0.1)");

  const long n_a = static_cast<long>(std::ceil(R / h - 1e-9));
  const long n_b = n_a + std::max(2L, std::lround(0.5 * std::numbers::pi / (k * h)));
  const std::vector<double> breaks = spec.breakpoints();
  const double centrifugal = l * (l + 1.0);
  const double h2 = h * h;
  auto g = [&](long n) {
    const double r = n * h;
    return centrifugal / (r * r) + potential_at_node(spec, r, breaks) - energy;
  };

  // u ~ c r^(l+1) at the origin; (g u)(0) is the limit of that product.
  const double u1 = std::pow(h, l + 1);
  double gu0 = 0.0;
  if (l == 1) gu0 = 2.0 * u1 / h2;
  if (l == 0 && spec.is_singular_at_origin()) {
    const auto& y = std::get<Yukawa>(spec.kind());
    gu0 = spec.scale() * y.strength * u1 / h;
  }
  double w_prev = -h2 / 12.0 * gu0;
  double u_cur = u1;
  double w_cur = (1.0 - h2 * g(1) / 12.0) * u_cur;
  double u_a = 0.0, u_b = 0.0;
  for (long n = 1; n < n_b; ++n) {
    const double w_next = 2.0 * w_cur - w_prev + h2 * g(n) * u_cur;
    const double u_next = w_next / (1.0 - h2 * g(n + 1) / 12.0);
    w_prev = w_cur;
    w_cur = w_next;
    u_cur = u_next;
    if (n + 1 == n_a) u_a = u_cur;
    if (!std::isfinite(u_cur)) throw MatchError("numerov_oracle: solution overflowed");
    // Keep magnitudes bounded; the matching ratio is scale free.
    if (std::abs(u_cur) > 1e200) {
      w_prev *= 1e-200;
      w_cur *= 1e-200;
      u_cur *= 1e-200;
      u_a *= 1e-200;
    }
  }
  u_b = u_cur;

  auto riccati = [l](double x, double& j, double& y) {
    j = x * std::sph_bessel(static_cast<unsigned>(l), x);
    y = x * std::sph_neumann(static_cast<unsigned>(l), x);
  };
  double j_a, y_a, j_b, y_b;
  riccati(k * n_a * h, j_a, y_a);
  riccati(k * n_b * h, j_b, y_b);
  const double numerator = u_b * j_a - u_a * j_b;
  const double denominator = u_b * y_a - u_a * y_b;
  if (std::abs(denominator) <= 1e-12 * (std::abs(u_b * y_a) + std::abs(u_a * y_b))) {
    throw MatchError("numerov_oracle: matching denominator vanishes, choose another R");
  }
  return std::atan(numerator / denominator);
}

std::vector<SamplePoint> standard_identity_grid() {
  const std::vector<Complex> energies = {
      {0.5, 0.0}, {1.0, 0.0}, {2.5, 0.0},  {10.0, 0.0}, {-1.0, 0.0}, {-10.0, 0.0}, {0.0, 3.0},
      {0.0, -10.0}, {5.0, -5.0}, {2.0, 1.0}, {-3.0, 2.0}, {-6.0, -7.0}, {1e-8, 0.0}, {0.0, -1e-8}};
  const std::vector<double> radii = {0.1, 0.37, 1.0, 2.2, 3.0, 4.1, 6.5, 9.0, 13.0, 20.0};
  std::vector<SamplePoint> grid;
  for (Complex e : energies)
    for (double r : radii) grid.push_back({e, r});
  return grid;
}

IdentityDefects identity_suite(int l, const PotentialSpec& spec, std::span<const SamplePoint> grid) {
  if (grid.empty()) throw DomainError("identity_suite: empty grid");
  IdentityDefects out;
  out.points = static_cast<int>(grid.size());
  for (const SamplePoint& p : grid) {
    const ReducedPair pair = reduced_pair(l, p.E, p.r);

    const Complex w1 = pair.jt * pair.dyt;
    const Complex w2 = pair.yt * pair.djt;
    out.wronskian = std::max(out.wronskian, std::abs(w1 - w2 - 1.0) / std::max(1.0, std::abs(w1) + std::abs(w2)));

    double v = spec.is_singular_at_origin() && p.r == 0.0 ? 1.0 : spec(p.r);
    if (v == 0.0) v = 1.0;
    const StateDerivative d = transformed_rhs_at(l, p.E, p.r, Complex{1.0}, Complex{0.3, 0.2}, v);
    const Complex lhs = d.da * pair.jt;
    const Complex rhs = d.db * pair.yt;
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale > 0.0) out.rhs_proportionality = std::max(out.rhs_proportionality, std::abs(lhs - rhs) / scale);

    if (p.E != Complex{}) {
      const Complex k = physical_momentum(p.E);
      const RiccatiValues closed = riccati_closed(l, k, p.r);
      if (std::abs(closed.j) > 0.0) {
        out.factorization_j = std::max(out.factorization_j,
                                       std::abs(closed.j - ipow(k, l + 1) * pair.jt) / std::abs(closed.j));
      }
      if (std::abs(closed.y) > 0.0) {
        out.factorization_y =
            std::max(out.factorization_y, std::abs(closed.y - ipow(k, -l) * pair.yt) / std::abs(closed.y));
      }
    }

    const ReducedPair on_one = reduced_pair(l, RiemannEnergy{p.E, Sheet::I}, p.r);
    const ReducedPair on_two = reduced_pair(l, RiemannEnergy{p.E, Sheet::II}, p.r);
    const double sheet_gap = std::abs(on_one.jt - on_two.jt) + std::abs(on_one.yt - on_two.yt) +
                             std::abs(on_one.djt - on_two.djt) + std::abs(on_one.dyt - on_two.dyt);
    out.sheet_independence = std::max(out.sheet_independence, sheet_gap);
  }
  return out;
}

bool VerificationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

VerificationReport run_verification(int l, const PotentialSpec& spec, double tol) {
  VerificationReport report;
  report.potential = std::string(spec.kind_name());
  report.l = l;
  report.tol = tol;
  report.certified_class = !spec.is_singular_at_origin();

  auto add = [&](std::string name, double value, double threshold, bool at_least = false) {
    const bool pass = std::isfinite(value) && (at_least ? value >= threshold : value <= threshold);
    report.checks.push_back({std::move(name), value, threshold, at_least, pass});
  };

  const auto grid = standard_identity_grid();
  const IdentityDefects ids = identity_suite(l, spec, grid);
  add("identity.wronskian", ids.wronskian, 1e-10);
  add("identity.rhs_proportionality", ids.rhs_proportionality, 1e-12);
  add("identity.factorization_j", ids.factorization_j, 1e-10);
  add("identity.factorization_y", ids.factorization_y, 1e-10);
  add("identity.sheet_independence", ids.sheet_independence, 0.0);

  const double R = choose_cutoff(spec, tol);
  const double ode_tol = std::min(tol, 1e-12);

  for (double e : {0.25, 1.0, 4.0}) {
    const JostPair p = jost_pair_at(l, {Complex{e, 0.0}, Sheet::I}, spec, R, tol);
    add("unitarity.E=" + std::to_string(e).substr(0, 4), std::abs(std::abs(s_matrix(p)) - 1.0), 1e-10);
  }
  for (Complex e : {Complex{1.0, -0.5}, Complex{-2.0, 1.0}, Complex{3.0, 2.0}}) {
    const double R_pair = jost_cutoff(spec, tol, physical_momentum(e).imag());
    const Complex s1 = s_matrix(jost_pair_at(l, {e, Sheet::I}, spec, R_pair, tol));
    const Complex s2 = s_matrix(jost_pair_at(l, {e, Sheet::II}, spec, R_pair, tol));
    std::ostringstream name;
    name << "sheet_reciprocity.E=" << e.real() << (e.imag() < 0 ? "" : "+") << e.imag() << "i";
    add(name.str(), std::abs(s1 * s2 - 1.0), 1e-12);
  }

  if (report.certified_class) {
    for (double radius : {0.1, 0.5, 2.0}) {
      const double R_loop = jost_cutoff(spec, tol, std::sqrt(radius));
      const MonodromyReport m = monodromy_loop(l, spec, Complex{}, radius, 64, R_loop, ode_tol);
      const std::string tag = "monodromy.r=" + std::to_string(radius).substr(0, 3);
      add(tag + ".closure_a", m.closure_gap_a / std::max(m.max_abs_a, 1e-300), 1e-10);
      add(tag + ".closure_b", m.max_abs_b > 0.0 ? m.closure_gap_b / m.max_abs_b : 0.0, 1e-10);
      add(tag + ".k_flip", m.k_flip_error, 1e-12);
      add(tag + ".jost_swap", m.jost_swap_error, 1e-10);
    }
    const CauchyResult c = cauchy_residual(l, spec, Complex{}, 0.5, 256, jost_cutoff(spec, tol, std::sqrt(0.5)), ode_tol);
    const double scale = std::numbers::pi * c.max_abs_a;
    add("cauchy.r=0.5.residual", std::abs(c.integral) / scale, 1e-8);
    add("cauchy.r=0.5.contrast_ratio", std::abs(c.contrast_integral) / std::max(std::abs(c.integral), 1e-300), 1e5,
        true);
  }

  const double R_oracle = std::max(choose_cutoff(spec, 1e-12), spec.length_scale());
  for (double e : {0.5, 1.0, 2.0}) {
    const double h = std::min(1e-3, 0.1 / std::sqrt(e));
    const double oracle = numerov_oracle(l, e, spec, R_oracle, h);
    const JostPair p = jost_pair_at(l, {Complex{e, 0.0}, Sheet::I}, spec, R, ode_tol);
    const double delta = 0.5 * std::arg(s_matrix(p));
    add("numerov_agreement.E=" + std::to_string(e).substr(0, 3), std::abs(phase_mod_pi(delta - oracle)), 1e-6);
  }
  return report;
}

std::string to_json(const VerificationReport& report) {
  nlohmann::ordered_json doc;
  doc["potential"] = report.potential;
  doc["l"] = report.l;
  doc["tol"] = report.tol;
  doc["certified_class"] = report.certified_class;
  if (!report.certified_class) doc["note"] = "outside the certified hypothesis class (singular at r = 0)";
  doc["all_pass"] = report.all_pass();
  auto& checks = doc["checks"] = nlohmann::ordered_json::array();
  for (const Check& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"comparison", c.at_least ? ">=" : "<="},
                      {"pass", c.pass}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace jostlab
