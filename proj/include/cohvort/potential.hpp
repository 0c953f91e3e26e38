#pragma once

#include <cstddef>
#include <vector>

namespace cohvort {

/// Piecewise-constant 1-D potential. Region r spans [breakpoints[r-1], breakpoints[r]);
/// a point lying exactly on a breakpoint belongs to the region on its right.
///
/// Units: lengths in 1/k of the incident wave, energies in units of the incident
/// energy (with 2m/hbar^2 = 1, so k = sqrt(E)).
class PotentialProfile {
 public:
  /// heights.size() must equal breakpoints.size() + 1 (leftmost region first),
  /// breakpoints strictly increasing, all values finite.
  PotentialProfile(std::vector<double> breakpoints, std::vector<double> heights);

  /// Single region of constant height (free space by default).
  static PotentialProfile uniform(double height = 0.0);

  /// Step of the given height at `position`: heights [0, height].
  static PotentialProfile step(double height, double position = 0.0);

  std::size_t region_count() const { return heights_.size(); }

  /// Index of the region containing x. Monotone non-decreasing in x.
  std::size_t region_index(double x) const;

  double height(std::size_t region) const { return heights_.at(region); }

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& heights() const { return heights_; }

  bool operator==(const PotentialProfile&) const = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> heights_;
};

}  // namespace cohvort
