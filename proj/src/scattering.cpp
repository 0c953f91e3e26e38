#include "cohvort/scattering.hpp"

#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace cohvort {

namespace {

using LongComplex = std::complex<long double>;

Complex wave_value(const RegionWave& w, Complex k, double x) {
  const Complex ikx = Complex(0.0, 1.0) * k * x;
  return w.forward * std::exp(ikx) + w.backward * std::exp(-ikx);
}

Complex wave_derivative(const RegionWave& w, Complex k, double x) {
  const Complex ikx = Complex(0.0, 1.0) * k * x;
  return Complex(0.0, 1.0) * k * (w.forward * std::exp(ikx) - w.backward * std::exp(-ikx));
}

void check_continuity(const PotentialProfile& profile, const std::vector<Complex>& ks,
                      const std::vector<RegionWave>& amps) {
  for (std::size_t b = 0; b < profile.breakpoints().size(); ++b) {
    const double x = profile.breakpoints()[b];
    const Complex vl = wave_value(amps[b], ks[b], x);
    const Complex vr = wave_value(amps[b + 1], ks[b + 1], x);
    const Complex dl = wave_derivative(amps[b], ks[b], x);
    const Complex dr = wave_derivative(amps[b + 1], ks[b + 1], x);
    const double value_scale = std::max(1.0, std::max(std::abs(vl), std::abs(vr)));
    const double deriv_scale = std::max(1.0, std::max(std::abs(dl), std::abs(dr)));
    if (!(std::abs(vl - vr) < 1e-10 * value_scale) ||
        !(std::abs(dl - dr) < 1e-10 * deriv_scale)) {
      std::ostringstream msg;
      msg << "scattering: continuity check failed at breakpoint x = " << x;
      throw std::runtime_error(msg.str());
    }
  }
}

}  // namespace

Complex wavevector(double energy, double height) {
  if (!std::isfinite(energy) || !std::isfinite(height)) {
    throw std::invalid_argument("scattering: energy and height must be finite");
  }
  if (energy <= 0.0) {
    throw std::domain_error("scattering: energy must be positive");
  }
  const double gap = energy - height;
  if (gap >= 0.0) {
    return Complex(std::sqrt(gap), 0.0);
  }
  return Complex(0.0, std::sqrt(-gap));
}

StepCoefficients step_coefficients(Complex k, Complex q) {
  const Complex sum = k + q;
  if (sum == Complex(0.0, 0.0)) {
    throw std::domain_error("scattering: step coefficients are singular for k + q = 0");
  }
  return {2.0 * k / sum, (k - q) / sum};
}

ScatteringState::ScatteringState(PotentialProfile profile, double energy, double weight,
                                 std::vector<Complex> wavevectors,
                                 std::vector<RegionWave> amplitudes)
    : profile_(std::move(profile)),
      energy_(energy),
      weight_(weight),
      wavevectors_(std::move(wavevectors)),
      amplitudes_(std::move(amplitudes)) {
  if (!std::isfinite(energy_) || energy_ <= 0.0) {
    throw std::invalid_argument("scattering: energy must be finite and positive");
  }
  if (!std::isfinite(weight_) || weight_ < 0.0) {
    throw std::invalid_argument("scattering: weight must be finite and non-negative");
  }
  if (wavevectors_.size() != profile_.region_count() ||
      amplitudes_.size() != profile_.region_count()) {
    throw std::invalid_argument("scattering: one wavevector and amplitude pair per region required");
  }
  if (amplitudes_.back().backward != Complex(0.0, 0.0)) {
    throw std::invalid_argument("scattering: rightmost region must be purely outgoing");
  }
}

Complex ScatteringState::evaluate(double x) const {
  const std::size_t r = profile_.region_index(x);
  return wave_value(amplitudes_[r], wavevectors_[r], x);
}

Complex ScatteringState::derivative(double x) const {
  const std::size_t r = profile_.region_index(x);
  return wave_derivative(amplitudes_[r], wavevectors_[r], x);
}

ScatteringState solve(const PotentialProfile& profile, double energy, double weight) {
  if (!std::isfinite(energy)) {
    throw std::invalid_argument("scattering: energy must be finite");
  }
  if (energy <= 0.0) {
    throw std::domain_error("scattering: energy must be positive");
  }
  if (!std::isfinite(weight) || weight < 0.0) {
    throw std::invalid_argument("scattering: weight must be finite and non-negative");
  }
  if (!(energy > profile.height(0))) {
    throw std::domain_error("scattering: energy must exceed the leftmost height for an incident wave");
  }

  const std::size_t regions = profile.region_count();
  std::vector<Complex> ks(regions);
  for (std::size_t r = 0; r < regions; ++r) {
    ks[r] = wavevector(energy, profile.height(r));
  }
  // A zero wavevector left of any breakpoint collapses the plane-wave basis;
  // the rightmost region tolerates it (constant outgoing wave, zero slope).
  for (std::size_t r = 1; r + 1 < regions; ++r) {
    if (ks[r] == Complex(0.0, 0.0)) {
      std::ostringstream msg;
      msg << "scattering: transfer matrix is singular at breakpoint x = "
          << profile.breakpoints()[r - 1] << " (energy equals the region height)";
      throw std::invalid_argument(msg.str());
    }
  }

  // Propagate right to left in extended precision: seed a unit outgoing wave,
  // match psi and psi' at each breakpoint, then rescale to unit incidence.
  const LongComplex li(0.0L, 1.0L);
  std::vector<LongComplex> lk(regions), la(regions), lb(regions);
  for (std::size_t r = 0; r < regions; ++r) {
    lk[r] = LongComplex(ks[r].real(), ks[r].imag());
  }
  la[regions - 1] = LongComplex(1.0L, 0.0L);
  lb[regions - 1] = LongComplex(0.0L, 0.0L);
  for (std::size_t b = regions - 1; b-- > 0;) {
    const long double x = profile.breakpoints()[b];
    const LongComplex right_plus = std::exp(li * lk[b + 1] * x);
    const LongComplex right_minus = std::exp(-li * lk[b + 1] * x);
    const LongComplex value = la[b + 1] * right_plus + lb[b + 1] * right_minus;
    const LongComplex slope = li * lk[b + 1] * (la[b + 1] * right_plus - lb[b + 1] * right_minus);
    const LongComplex left_plus = std::exp(li * lk[b] * x);
    const LongComplex left_minus = std::exp(-li * lk[b] * x);
    la[b] = (value + slope / (li * lk[b])) * 0.5L * left_minus;
    lb[b] = (value - slope / (li * lk[b])) * 0.5L * left_plus;
  }

  if (std::abs(la[0]) == 0.0L) {
    throw std::runtime_error("scattering: transfer matrix produced no incident wave");
  }
  const LongComplex scale = LongComplex(1.0L, 0.0L) / la[0];
  std::vector<RegionWave> amps(regions);
  for (std::size_t r = 0; r < regions; ++r) {
    const LongComplex a = la[r] * scale;
    const LongComplex b = lb[r] * scale;
    amps[r] = {Complex(static_cast<double>(a.real()), static_cast<double>(a.imag())),
               Complex(static_cast<double>(b.real()), static_cast<double>(b.imag()))};
  }
  amps.front().forward = Complex(1.0, 0.0);
  amps.back().backward = Complex(0.0, 0.0);

  check_continuity(profile, ks, amps);
  return ScatteringState(profile, energy, weight, std::move(ks), std::move(amps));
}

}  // namespace cohvort
