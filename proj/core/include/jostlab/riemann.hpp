#pragma once

#include <complex>
#include <string_view>

namespace jostlab {

using Complex = std::complex<double>;

enum class Sheet { I, II };

constexpr std::string_view to_string(Sheet s) { return s == Sheet::I ? "I" : "II"; }

// Principal momentum on the physical sheet: Im k >= 0, and on the cut
// E in [0, inf) the value from the upper lip (k >= 0).
inline Complex physical_momentum(Complex energy) {
  Complex k = std::sqrt(energy);
  if (k.imag() < 0.0 || (k.imag() == 0.0 && k.real() < 0.0)) k = -k;
  return k;
}

// A point on the two-sheeted energy surface. Scaled units, k^2 = E.
struct RiemannEnergy {
  Complex E{};
  Sheet sheet = Sheet::I;

  Complex momentum() const {
    const Complex k = physical_momentum(E);
    return sheet == Sheet::I ? k : -k;
  }

  // Sheet on which k is (closest to) the momentum of k^2.
  static RiemannEnergy from_momentum(Complex k) {
    const Complex energy = k * k;
    const Complex physical = physical_momentum(energy);
    return {energy, std::abs(k - physical) <= std::abs(k + physical) ? Sheet::I : Sheet::II};
  }

  friend bool operator==(const RiemannEnergy&, const RiemannEnergy&) = default;
};

inline Sheet other(Sheet s) { return s == Sheet::I ? Sheet::II : Sheet::I; }

// z^n by repeated multiplication, so that (-z)^n == (-1)^n z^n bit for bit.
inline Complex ipow(Complex z, int n) {
  Complex result{1.0, 0.0};
  const bool invert = n < 0;
  for (int i = 0; i < (invert ? -n : n); ++i) result *= z;
  return invert ? 1.0 / result : result;
}

}  // namespace jostlab
