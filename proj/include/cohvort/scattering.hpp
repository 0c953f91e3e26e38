#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "cohvort/potential.hpp"

namespace cohvort {

using Complex = std::complex<double>;

/// Wavevector in a region of height V at energy E, principal branch: real and
/// positive where the region is classically allowed, positive imaginary where
/// it is forbidden, so exp(ikx) always propagates or decays to the right.
Complex wavevector(double energy, double height);

/// Amplitude transmission and reflection of a single potential step for a
/// unit wave incident from the side with wavevector k onto the side with q:
/// T = 2k/(k+q), R = (k-q)/(k+q). T is an amplitude ratio and may exceed 1.
struct StepCoefficients {
  Complex transmission;
  Complex reflection;
};

StepCoefficients step_coefficients(Complex k, Complex q);

/// Plane-wave amplitudes of one region: psi(x) = forward e^{ikx} + backward e^{-ikx}.
struct RegionWave {
  Complex forward;
  Complex backward;
};

/// Stationary scattering solution for a unit-amplitude wave incident from the
/// left, together with the statistical weight it carries inside an ensemble.
/// Immutable once constructed; evaluate/derivative are pure and reentrant.
class ScatteringState {
 public:
  ScatteringState(PotentialProfile profile, double energy, double weight,
                  std::vector<Complex> wavevectors, std::vector<RegionWave> amplitudes);

  Complex evaluate(double x) const;
  Complex derivative(double x) const;

  double energy() const { return energy_; }
  double weight() const { return weight_; }
  const PotentialProfile& profile() const { return profile_; }
  const std::vector<Complex>& wavevectors() const { return wavevectors_; }
  const std::vector<RegionWave>& amplitudes() const { return amplitudes_; }

  /// Outgoing amplitude in the rightmost region.
  Complex transmission_amplitude() const { return amplitudes_.back().forward; }
  /// Backward amplitude in the leftmost region.
  Complex reflection_amplitude() const { return amplitudes_.front().backward; }

 private:
  PotentialProfile profile_;
  double energy_;
  double weight_;
  std::vector<Complex> wavevectors_;
  std::vector<RegionWave> amplitudes_;
};

/// Solves the stationary Schroedinger equation (units 2m/hbar^2 = 1) for a
/// unit-amplitude wave incident from the left, with nothing entering from the
/// right. The energy must exceed the leftmost height so the incident wave
/// propagates. Interior regions may be evanescent, but an interior height
/// exactly equal to the energy makes the transfer matrix singular and is
/// rejected with the offending breakpoint.
ScatteringState solve(const PotentialProfile& profile, double energy, double weight = 1.0);

}  // namespace cohvort
