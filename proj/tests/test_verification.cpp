#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "jostlab/error.hpp"
#include "jostlab/jost.hpp"
#include "jostlab/verification.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace jostlab;

namespace {

const PotentialSpec kGauss(Gaussian{-3.0, 1.0});
const PotentialSpec kExp(Exponential{-2.0, 1.0});
const PotentialSpec kWell(SquareWell{4.0, 1.0});

double gauss_R() { return choose_cutoff(kGauss, 1e-12); }

}  // namespace

TEST_CASE("monodromy around the origin") {
  for (int l = 0; l <= 1; ++l) {
    const MonodromyReport m = monodromy_loop(l, kGauss, 0.0, 0.5, 64, gauss_R(), 1e-12);
    CHECK(m.encloses_origin);
    CHECK(m.n_points == 64);
    CHECK(std::isfinite(m.closure_gap));
    CHECK(m.closure_gap_a <= 1e-10 * m.max_abs_a);
    CHECK(m.closure_gap_b <= 1e-10 * m.max_abs_b);
    CHECK(m.k_flip_verified);
    CHECK(m.k_flip_error <= 1e-12);
    CHECK(m.jost_swap_error <= 1e-10);
  }
}

TEST_CASE("monodromy off the branch point") {
  const MonodromyReport m = monodromy_loop(0, kGauss, {2.0, 0.5}, 0.3, 64, gauss_R(), 1e-12);
  CHECK_FALSE(m.encloses_origin);
  CHECK_FALSE(m.k_flip_verified);
  CHECK(m.k_return_error <= 1e-12);
  CHECK(m.jost_swap_error <= 1e-10);
}

TEST_CASE("monodromy refinement") {
  const MonodromyReport coarse = monodromy_loop(0, kGauss, 0.0, 0.5, 32, gauss_R(), 1e-12);
  const MonodromyReport fine = monodromy_loop(0, kGauss, 0.0, 0.5, 64, gauss_R(), 1e-12);
  CHECK(fine.max_discontinuity <= 0.5 * coarse.max_discontinuity * (1.0 + 1e-9));
}

TEST_CASE("monodromy errors") {
  CHECK_THROWS_AS(monodromy_loop(0, kGauss, 0.0, 0.5, 8, gauss_R(), 1e-12), DomainError);
  CHECK_THROWS_AS(monodromy_loop(0, kGauss, 0.5, 0.5, 64, gauss_R(), 1e-12), DomainError);
  CHECK_THROWS_AS(monodromy_loop(0, kGauss, 0.0, 0.0, 64, gauss_R(), 1e-12), DomainError);
}

TEST_CASE("Cauchy residual and contrast") {
  const CauchyResult c = cauchy_residual(0, kGauss, 0.0, 0.5, 256, gauss_R(), 1e-12);
  const double scale = 2.0 * std::numbers::pi * 0.5 * c.max_abs_a;
  CHECK(std::abs(c.integral) <= 1e-8 * scale);
  CHECK(std::abs(c.contrast_integral) > 1e-3 * scale);

  const CauchyResult free = cauchy_residual(1, PotentialSpec::free(), 0.0, 0.5, 64, 5.0, 1e-12);
  CHECK(free.max_abs_a == 1.0);
  CHECK(std::abs(free.integral) < 1e-15);
}

TEST_CASE("Cauchy spectral decay") {
  // A wider circle keeps the integrand far from constant, so the trapezoid
  // error is still visible at 64 points.
  const double R = gauss_R();
  const CauchyResult c64 = cauchy_residual(0, kGauss, 0.0, 2.0, 64, R, 1e-13);
  const CauchyResult c128 = cauchy_residual(0, kGauss, 0.0, 2.0, 128, R, 1e-13);
  const double e64 = std::abs(c64.integral), e128 = std::abs(c128.integral);
  const double floor = 1e-11 * 2.0 * std::numbers::pi * 2.0 * c64.max_abs_a;
  CHECK((e128 <= 0.1 * e64 || e128 <= floor));
}

TEST_CASE("Numerov oracle") {
  CHECK(std::abs(numerov_oracle(0, 1.0, PotentialSpec::free(), 5.0, 1e-3)) < 1e-8);
  CHECK(std::abs(numerov_oracle(2, 1.0, PotentialSpec::free(), 5.0, 1e-3)) < 1e-8);

  const double dw = numerov_oracle(0, 1.0, kWell, 2.0, 1e-3);
  CHECK(std::abs(oracle::wrap_pi(dw - oracle::square_well_delta0(4.0, 1.0, 1.0))) < 1e-6);
  for (int l = 1; l <= 2; ++l) {
    const double d = numerov_oracle(l, 2.0, kWell, 2.0, 1e-3);
    CHECK(std::abs(oracle::wrap_pi(d - oracle::square_well_delta(l, 4.0, 1.0, std::sqrt(2.0)))) < 1e-6);
  }

  const double R = std::max(choose_cutoff(kGauss, 1e-12), kGauss.length_scale());
  const double dg = numerov_oracle(0, 1.0, kGauss, R, 1e-3);
  const double dj = 0.5 * std::arg(s_matrix(jost_pair(0, {1.0, Sheet::I}, kGauss, 1e-12)));
  CHECK(std::abs(oracle::wrap_pi(dg - dj)) < 1e-6);
}

TEST_CASE("Numerov oracle domain") {
  CHECK_THROWS_AS(numerov_oracle(0, 0.0, kWell, 2.0, 1e-3), DomainError);
  CHECK_THROWS_AS(numerov_oracle(0, -1.0, kWell, 2.0, 1e-3), DomainError);
  CHECK_THROWS_AS(numerov_oracle(0, 100.0, kWell, 2.0, 0.02), DomainError);
}

TEST_CASE("identity suite") {
  const auto grid = standard_identity_grid();
  REQUIRE_FALSE(grid.empty());

  const IdentityDefects free = identity_suite(2, PotentialSpec::free(), grid);
  CHECK(free.points == static_cast<int>(grid.size()));
  CHECK(free.wronskian <= 1e-12);
  CHECK(free.rhs_proportionality <= 1e-12);
  CHECK(free.factorization_j <= 1e-12);
  CHECK(free.factorization_y <= 1e-12);
  CHECK(free.sheet_independence == 0.0);

  for (int l = 0; l <= 3; ++l) {
    const IdentityDefects d = identity_suite(l, kGauss, grid);
    CHECK(d.wronskian <= 1e-10);
    CHECK(d.rhs_proportionality <= 1e-10);
    CHECK(d.factorization_j <= 1e-10);
    CHECK(d.factorization_y <= 1e-10);
    CHECK(d.sheet_independence == 0.0);
  }

  const std::vector<SamplePoint> near{{1e-8, 0.5}, {Complex{0.0, 1e-8}, 2.0}, {-1e-8, 10.0}};
  const IdentityDefects n = identity_suite(3, kExp, near);
  CHECK(n.points == 3);
  CHECK(n.wronskian <= 1e-10);
  CHECK(n.factorization_j <= 1e-10);
  CHECK(n.factorization_y <= 1e-10);
}

TEST_CASE("verification report") {
  const VerificationReport r = run_verification(0, kGauss, 1e-10);
  CHECK(r.certified_class);
  CHECK(r.all_pass());
  bool has_monodromy = false, has_cauchy = false, has_numerov = false;
  for (const Check& c : r.checks) {
    INFO(c.name);
    CHECK(c.pass);
    CHECK(std::isfinite(c.value));
    has_monodromy |= c.name.find("monodromy") != std::string::npos;
    has_cauchy |= c.name.find("cauchy") != std::string::npos;
    has_numerov |= c.name.find("numerov") != std::string::npos;
  }
  CHECK(has_monodromy);
  CHECK(has_cauchy);
  CHECK(has_numerov);

  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["potential"] == "gaussian");
  CHECK(j["l"] == 0);
  CHECK(j["certified_class"] == true);
  CHECK(j["all_pass"] == true);
  REQUIRE(j["checks"].size() == r.checks.size());
  for (const auto& c : j["checks"]) {
    CHECK(c.contains("name"));
    CHECK(c.contains("value"));
    CHECK(c.contains("threshold"));
    CHECK(c.contains("comparison"));
    CHECK(c["pass"] == true);
  }
}

TEST_CASE("singular potentials skip the loop checks") {
  const VerificationReport r = run_verification(0, PotentialSpec(Yukawa{-1.5, 1.0}), 1e-10);
  CHECK_FALSE(r.certified_class);
  CHECK(r.all_pass());
  for (const Check& c : r.checks) {
    CHECK(c.name.find("monodromy") == std::string::npos);
    CHECK(c.name.find("cauchy") == std::string::npos);
  }
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["certified_class"] == false);
  CHECK(j.contains("note"));
}
