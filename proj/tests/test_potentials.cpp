#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "jostlab/error.hpp"
#include "jostlab/potentials.hpp"

using namespace jostlab;

namespace {

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "jostlab_test_potentials";
  std::filesystem::create_directories(dir);
  return dir;
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("built-in evaluation") {
  const PotentialSpec well(SquareWell{4.0, 1.0});
  CHECK(well(0.5) == -4.0);
  CHECK(well(2.0) == 0.0);
  CHECK(PotentialSpec(Gaussian{-2.0, 1.0})(0.0) == -2.0);
  CHECK(PotentialSpec(Exponential{3.0, 2.0})(2.0) == doctest::Approx(3.0 / std::exp(1.0)));
  CHECK(PotentialSpec(Yukawa{2.0, 0.5})(2.0) == doctest::Approx(2.0 * std::exp(-1.0) / 2.0));
  CHECK(PotentialSpec(Gaussian{-2.0, 1.0}, 3.0)(0.0) == -6.0);
  CHECK_THROWS_AS(PotentialSpec(Yukawa{1.0, 1.0})(0.0), DomainError);
  CHECK_THROWS_AS(well(-1.0), DomainError);
  CHECK(PotentialSpec::free().is_zero());
  CHECK_FALSE(well.is_zero());
}

TEST_CASE("tabulated interpolation") {
  const Tabulated t({0.0, 1.0, 2.0, 4.0}, {-3.0, -1.0, 0.5, 0.0});
  const PotentialSpec spec(t);
  CHECK(spec(0.0) == -3.0);
  CHECK(spec(1.0) == -1.0);
  CHECK(spec(2.0) == 0.5);
  CHECK(spec(4.0) == 0.0);
  CHECK(spec(5.0) == 0.0);
  // Monotone data stays within the sample range on each interval.
  for (double r = 0.0; r <= 1.0; r += 0.01) {
    CHECK(spec(r) >= -3.0);
    CHECK(spec(r) <= -1.0);
  }
  // Continuity at knots.
  CHECK(std::abs(spec(std::nextafter(1.0, 0.0)) - spec(1.0)) < 1e-12);
  CHECK(std::abs(spec(std::nextafter(2.0, 3.0)) - spec(2.0)) < 1e-12);

  const Tabulated shifted({0.5, 1.0}, {2.0, 1.0});
  CHECK(shifted(0.1) == 2.0);

  CHECK_THROWS_AS(Tabulated({0.0}, {1.0}), DomainError);
  CHECK_THROWS_AS(Tabulated({0.0, 1.0, 1.0}, {1.0, 2.0, 3.0}), DomainError);
  CHECK_THROWS_AS(Tabulated({0.0, 2.0, 1.0}, {1.0, 2.0, 3.0}), DomainError);
  CHECK_THROWS_AS(Tabulated({-1.0, 1.0}, {1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(Tabulated({0.0, 1.0}, {1.0, NAN}), DomainError);
}

TEST_CASE("tail bounds") {
  CHECK(tail_bound(PotentialSpec(SquareWell{4, 1}), 2.0) == 0.0);
  CHECK(tail_bound(PotentialSpec(Exponential{1, 1}), 10.0) <= 12.0 * std::exp(-10.0));
  CHECK(tail_bound(PotentialSpec(Tabulated({0.0, 4.0, 8.0}, {-1.0, -0.5, 0.0})), 9.0) == 0.0);
  CHECK_THROWS_AS(tail_bound(PotentialSpec(SquareWell{4, 1}), 0.0), DomainError);

  SUBCASE("bounds dominate a direct quadrature") {
    for (const PotentialSpec& spec :
         {PotentialSpec(Exponential{-2, 1.5}), PotentialSpec(Gaussian{3, 0.8}), PotentialSpec(Yukawa{-1, 0.7}),
          PotentialSpec(Tabulated({0.0, 1.0, 3.0, 5.0}, {-4.0, -2.0, 1.0, 0.0}))}) {
      for (double R : {0.5, 2.0, 6.0}) {
        double integral = 0.0;
        const double h = 1e-3;
        for (double r = R + 0.5 * h; r < R + 80.0; r += h) integral += std::abs(spec(r)) * (1 + r) * h;
        CHECK(tail_bound(spec, R) >= integral * (1 - 1e-6));
      }
    }
  }

  SUBCASE("non-increasing in R") {
    for (const PotentialSpec& spec : {PotentialSpec(Exponential{1, 1}), PotentialSpec(Gaussian{-1, 2}),
                                      PotentialSpec(Yukawa{1, 2}), PotentialSpec(SquareWell{3, 2})}) {
      double prev = tail_bound(spec, 0.01);
      for (double R = 0.1; R < 30.0; R += 0.37) {
        const double b = tail_bound(spec, R);
        CHECK(b <= prev);
        prev = b;
      }
    }
  }
}

TEST_CASE("cutoff selection") {
  CHECK(choose_cutoff(PotentialSpec(SquareWell{4, 1}), 1e-12) == 1.0);
  const double R = choose_cutoff(PotentialSpec(Exponential{1, 1}), 1e-10);
  CHECK(R >= 25.0);
  CHECK(R <= 28.0);
  for (const PotentialSpec& spec : {PotentialSpec(Exponential{1, 1}), PotentialSpec(Gaussian{-1, 2}),
                                    PotentialSpec(Yukawa{1, 2})}) {
    for (double tol : {1e-6, 1e-10, 1e-14}) CHECK(tail_bound(spec, choose_cutoff(spec, tol)) <= tol);
  }
  CHECK(std::isfinite(choose_cutoff(PotentialSpec(Yukawa{1.0, 20.0}), 1e-8)));
  CHECK_THROWS_AS(choose_cutoff(PotentialSpec(Yukawa{1.0, 0.0}), 1e-8), CutoffError);
  CHECK_THROWS_AS(choose_cutoff(PotentialSpec(SquareWell{4, 1}), 0.0), DomainError);
}

TEST_CASE("config parsing") {
  const PotentialSpec w = parse_spec("kind=square_well\ndepth=4\nradius=1");
  const auto& sw = std::get<SquareWell>(w.kind());
  CHECK(sw.depth == 4.0);
  CHECK(sw.radius == 1.0);

  const PotentialSpec g = parse_spec("# comment\n kind = gaussian \nstrength=-3\n\nwidth=0.5\nscale=2\n");
  CHECK(g.scale() == 2.0);
  CHECK(g(0.0) == -6.0);

  auto expect_error = [](const std::string& text, const std::string& needle, int line) {
    try {
      parse_spec(text);
      FAIL("no error for: " << text);
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
      CHECK(e.line() == line);
    }
  };
  expect_error("kind=square_well\nradius=1", "missing key: depth", 0);
  expect_error("kind=square_well\ndepth=4\nradius=1\ncolour=red", "unknown key", 4);
  expect_error("kind=square_well\ndepth=four\nradius=1", "non-numeric", 2);
  expect_error("kind=square_well\ndepth=4\ndepth=5\nradius=1", "duplicate", 3);
  expect_error("kind=square_well\ndepth=4\nradius=1\nwidth=2", "does not apply", 4);
  expect_error("kind=circle\n", "unknown kind", 1);
  expect_error("depth=4\n", "missing key: kind", 0);
  expect_error("kind square_well\n", "key=value", 1);
}

TEST_CASE("tabulated configs") {
  const auto dir = temp_dir();
  write(dir / "v.csv", "r,V\n0,-2\n1,-1\n2,0\n");
  write(dir / "v.cfg", "kind=tabulated\nfile=v.csv\n");
  const PotentialSpec spec = load_spec(dir / "v.cfg");
  CHECK(spec(1.0) == -1.0);
  CHECK(spec.kind_name() == "tabulated");

  const Tabulated bare = parse_table("# no header\n0 , 1\n1,2\n");
  CHECK(bare.values().size() == 2);

  write(dir / "bad.csv", "r,V\n0,1\n2,2\n1,3\n");
  try {
    parse_spec("kind=tabulated\nfile=bad.csv\n", dir);
    FAIL("non-monotone table accepted");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("increasing") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_table("r,V\n0,1\nx,2\n"), ParseError);
  CHECK_THROWS_AS(parse_table("r,V\n0,1,3\n1,2,4\n"), ParseError);
  CHECK_THROWS_AS(load_spec(dir / "missing.cfg"), DomainError);
  CHECK_THROWS_AS(parse_spec("kind=tabulated\nfile=nothere.csv\n", dir), DomainError);
}

TEST_CASE("shipped configs load") {
  for (const char* name : {"well.cfg", "gauss.cfg", "exp.cfg", "yukawa.cfg", "barrier.cfg"}) {
    CHECK_NOTHROW(load_spec(std::filesystem::path(JOSTLAB_CONFIG_DIR) / name));
  }
  const PotentialSpec barrier = load_spec(std::filesystem::path(JOSTLAB_CONFIG_DIR) / "barrier.cfg");
  CHECK(barrier(0.5) == -4.0);
  CHECK(barrier(1.25) == 6.0);
  CHECK(barrier(2.0) == 0.0);
}

TEST_CASE("length scales and breakpoints") {
  CHECK(PotentialSpec(SquareWell{4, 2}).length_scale() == 2.0);
  CHECK(PotentialSpec(Yukawa{1, 4}).length_scale() == 0.25);
  CHECK(std::isinf(PotentialSpec(Yukawa{1, 0}).length_scale()));
  CHECK(PotentialSpec(SquareWell{4, 2}).breakpoints() == std::vector<double>{2.0});
  CHECK(PotentialSpec(Gaussian{1, 1}).breakpoints().empty());
}
