#include "cohvort/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cohvort {

PotentialProfile::PotentialProfile(std::vector<double> breakpoints,
                                   std::vector<double> heights)
    : breakpoints_(std::move(breakpoints)), heights_(std::move(heights)) {
  if (heights_.empty()) {
    throw std::invalid_argument("potential: at least one region required");
  }
  if (heights_.size() != breakpoints_.size() + 1) {
    throw std::invalid_argument(
        "potential: heights must have exactly one more entry than breakpoints");
  }
  for (double b : breakpoints_) {
    if (!std::isfinite(b)) {
      throw std::invalid_argument("potential: non-finite breakpoint");
    }
  }
  for (double h : heights_) {
    if (!std::isfinite(h)) {
      throw std::invalid_argument("potential: non-finite height");
    }
  }
  auto bad = std::adjacent_find(breakpoints_.begin(), breakpoints_.end(),
                                [](double a, double b) { return a >= b; });
  if (bad != breakpoints_.end()) {
    throw std::invalid_argument("potential: breakpoints must be strictly increasing");
  }
}

PotentialProfile PotentialProfile::uniform(double height) {
  return PotentialProfile({}, {height});
}

PotentialProfile PotentialProfile::step(double height, double position) {
  return PotentialProfile({position}, {0.0, height});
}

std::size_t PotentialProfile::region_index(double x) const {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("potential: non-finite coordinate");
  }
  // upper_bound counts breakpoints <= x, which puts a point sitting exactly on
  // a breakpoint into the region on its right.
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  return static_cast<std::size_t>(it - breakpoints_.begin());
}

}  // namespace cohvort
