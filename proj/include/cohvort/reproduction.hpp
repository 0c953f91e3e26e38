#pragma once

#include <cstddef>
#include <vector>

#include "cohvort/coherence.hpp"
#include "cohvort/singularity.hpp"

namespace cohvort {

/// Parameters of the reference step-lattice run: a step of height
/// v_over_e * energy at the origin, sampled over a quadrant window. The
/// defaults pin the canonical configuration (k = 1, V/E = 0.99).
struct LatticeRunOptions {
  double energy = 1.0;
  double v_over_e = 0.99;
  double weight_free = 1.0;
  double weight_scattered = 1.0;
  Window window{-15.0, -0.01, 0.01, 15.0};
  std::size_t x_count = 1500;
  std::size_t xp_count = 1500;
  DetectOptions detect;
  /// Relative tolerance of the lattice-spacing comparison.
  double spacing_rel_tol = 1e-6;
};

/// Everything the reference run measures, plus the pass/fail verdicts:
/// detected sites must pair with every analytic site within one grid spacing,
/// with no detections left over, reproduce both lattice spacings, and keep
/// closed-form residuals below the zero threshold.
struct LatticeRunReport {
  double k = 0.0;
  double q = 0.0;
  CoherenceField field;
  std::vector<VortexSite> detected;
  std::vector<VortexSite> analytic;
  MatchReport match;
  double match_tolerance = 0.0;

  double x_spacing_expected = 0.0;
  double xp_spacing_expected = 0.0;
  double x_spacing_max_rel_dev = 0.0;
  double xp_spacing_max_rel_dev = 0.0;

  double max_analytic_residual = 0.0;
  double max_detected_residual = 0.0;
  double residual_bound = 0.0;

  std::size_t vortex_count = 0;
  std::size_t antivortex_count = 0;

  bool all_analytic_matched = false;
  bool no_extra_detected = false;
  bool x_spacing_ok = false;
  bool xp_spacing_ok = false;
  bool analytic_residuals_ok = false;
  bool detected_converged = false;

  bool passed() const {
    return all_analytic_matched && no_extra_detected && x_spacing_ok && xp_spacing_ok &&
           analytic_residuals_ok && detected_converged;
  }
};

/// Builds the two-member mixture for the options' step, samples the window,
/// detects vortices, and cross-validates them against the closed-form
/// lattice. Requires 0 <= v_over_e < 1 so the transmitted wave propagates,
/// and v_over_e > 0 so a lattice exists.
LatticeRunReport run_step_lattice(const LatticeRunOptions& options = {});

}  // namespace cohvort
