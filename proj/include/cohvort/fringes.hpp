#pragma once

#include <vector>

#include "cohvort/coherence.hpp"

namespace cohvort {

/// Background-subtracted two-slit pattern for the slit pair (x, x'):
///   intensity(theta) = 2 sqrt(I(x) I(x')) |g| cos(theta + offset),
/// so the central maximum sits at theta = -offset. The screen coordinate is
/// the dimensionless fringe phase of the far-field small-angle limit.
struct FringePattern {
  std::vector<double> theta;
  std::vector<double> intensity;
  double visibility;  // |g| at the slit pair
  double offset;      // arg g at the slit pair
};

/// Samples the pattern over the screen axis. Throws when either slit sits at
/// a point of vanishing intensity.
FringePattern pattern(const Ensemble& ensemble, double x, double xp, const Axis& screen);

struct LoopPoint {
  double x;
  double xp;
};

/// Closed axis-aligned square traversed counter-clockwise from the lower-left
/// corner, points_per_side samples per side plus the repeated start point
/// (4n + 1 points in total, last bitwise equal to the first).
std::vector<LoopPoint> square_loop(double center_x, double center_xp, double half_side,
                                   std::size_t points_per_side);

/// Fringe offsets along one closed-loop traversal. The cumulative column
/// unwraps the offsets step by step; total is its net change, 2*pi times the
/// winding of the enclosed region.
struct RatchetScan {
  std::vector<LoopPoint> points;
  std::vector<double> offsets;
  std::vector<double> cumulative;
  double total;
  int winding;
};

/// Accumulates principal-value offset differences along the loop. The loop
/// must be closed (last point bitwise equal to the first); every point needs
/// |g| above eps_g, and per-step offset jumps of 0.99*pi or more are rejected
/// as undersampling.
RatchetScan ratchet_scan(const Ensemble& ensemble, const std::vector<LoopPoint>& loop,
                         double eps_g = 1e-12);

}  // namespace cohvort
