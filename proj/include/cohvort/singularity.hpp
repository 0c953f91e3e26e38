#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "cohvort/coherence.hpp"

namespace cohvort {

/// Maps a phase difference to the principal interval (-pi, pi].
double wrap_phase(double delta);

enum class SiteSource { kDetected, kAnalytic };

/// One phase singularity: a coordinate pair where the correlation vanishes
/// and its phase winds by 2*pi*charge.
struct VortexSite {
  double x = 0.0;
  double xp = 0.0;
  int charge = 0;
  SiteSource source = SiteSource::kDetected;
  std::optional<std::array<std::size_t, 2>> cell;
  std::optional<double> residual;
  bool converged = false;
};

/// Angular offsets alpha and beta placing the zero lattice of the step-model
/// mixture, one pair per topological charge.
struct AngleShifts {
  double alpha;
  double beta;
  int charge;
};

struct DetectOptions {
  /// Corner-modulus degeneracy threshold, relative to the field's max |G|.
  double eps_g_rel = 1e-12;
  /// Converged-residual threshold, relative to the field's max |G|.
  double eps_zero_rel = 1e-8;
  /// Position tolerance of zero refinement, in length units.
  double position_tol = 1e-10;
  std::size_t max_iterations = 64;
};

/// Axis-aligned rectangle of grid cells, corner cell indices inclusive.
struct CellRect {
  std::size_t i0;
  std::size_t j0;
  std::size_t i1;
  std::size_t j1;
};

/// Rectangle in (x, x') coordinates.
struct Window {
  double x_min;
  double x_max;
  double xp_min;
  double xp_max;
};

/// Integer winding per grid cell; kIndeterminate marks cells skipped because
/// a corner was degenerate.
class WindingMap {
 public:
  static constexpr std::int8_t kIndeterminate = INT8_MIN;

  WindingMap(std::size_t x_cells, std::size_t xp_cells);

  std::size_t x_cells() const { return x_cells_; }
  std::size_t xp_cells() const { return xp_cells_; }
  std::int8_t at(std::size_t i, std::size_t j) const { return values_[i * xp_cells_ + j]; }
  void set(std::size_t i, std::size_t j, std::int8_t w) { values_[i * xp_cells_ + j] = w; }
  const std::vector<std::int8_t>& values() const { return values_; }

  /// Sum of all determinate windings.
  long total_charge() const;

  bool operator==(const WindingMap&) const = default;

 private:
  std::size_t x_cells_;
  std::size_t xp_cells_;
  std::vector<std::int8_t> values_;
};

/// Winding of the cell with lower-left corner (i, j), traversed counter-
/// clockwise in the (x, x') plane. Exact integer by construction. Returns
/// nullopt when a corner modulus is at or below eps_abs (pass a negative
/// eps_abs to use the default 1e-12 * max|G|).
std::optional<int> plaquette_winding(const CoherenceField& field, std::size_t i, std::size_t j,
                                     double eps_abs = -1.0);

/// Winding along the boundary of a cell rectangle; equals the sum of the
/// enclosed plaquette windings whenever no boundary corner is degenerate.
std::optional<int> contour_circulation(const CoherenceField& field, const CellRect& rect,
                                       double eps_abs = -1.0);

/// Windings of every grid cell. Pure per cell, so the parallel and serial
/// variants agree bitwise.
WindingMap winding_map(const CoherenceField& field, const DetectOptions& options = {});
WindingMap winding_map_serial(const CoherenceField& field, const DetectOptions& options = {});

struct RefineResult {
  double x;
  double xp;
  double residual;
  std::size_t iterations;
};

/// Drives |G| toward zero inside the given bounds, starting from (x0, xp0):
/// Newton steps on (Re G, Im G) with a finite-difference Jacobian, falling
/// back to golden-section coordinate descent when the Jacobian degenerates.
RefineResult refine_zero(const FieldEvaluator& evaluator, const Window& bounds, double x0,
                         double xp0, const DetectOptions& options = {});

/// One refined VortexSite per nonzero-winding cell, sorted by (x, x'). The
/// evaluator (or the ensemble correlation) refines positions; sites whose
/// refined |G| stays at or above eps_zero_rel * max|G| are kept but flagged
/// unconverged.
std::vector<VortexSite> detect(const CoherenceField& field, const FieldEvaluator& evaluator,
                               const DetectOptions& options = {});
std::vector<VortexSite> detect(const CoherenceField& field, const Ensemble& ensemble,
                               const DetectOptions& options = {});

/// Angles of the step-model zero condition for real step coefficients:
///   alpha = pi/p - arccos((1 + T^2 - T^2 R^2) / (2T))
///   beta  = pi/p + arccos((1 - T^2 + T^2 R^2) / (2TR))
/// Arguments may stray outside [-1, 1] by at most 1e-12 (clamped); farther
/// out the phasor triangle cannot close and a domain error is raised.
AngleShifts angle_shifts(double transmission, double reflection, int charge);

/// Closed-form zero lattice of the two-member step mixture inside the window,
/// restricted to the quadrant x < 0 < x':
///   x_u = p (beta - alpha) / (2k) - u pi / k
///   x'_v = -p alpha / (k - q) + v 2 pi / (k - q)
/// Sites are sorted by (x, x') and carry |analytic_step_G| as residual.
std::vector<VortexSite> analytic_lattice(double k, double q, int charge, const Window& window);

struct MatchPair {
  std::size_t analytic_index;
  std::size_t detected_index;
  double distance;
};

struct MatchReport {
  std::vector<MatchPair> pairs;
  std::vector<std::size_t> unmatched_analytic;
  std::vector<std::size_t> unmatched_detected;
  double max_distance = 0.0;
};

/// Greedy nearest-neighbor pairing of equal-charge sites within tolerance.
MatchReport match_sites(const std::vector<VortexSite>& analytic,
                        const std::vector<VortexSite>& detected, double tolerance);

/// Shortest period of the step-mixture phase pattern: min(pi/k, 2pi/|k-q|).
double shortest_phase_period(double k, double q);

/// Axis point count giving at least eight samples per shortest phase period.
std::size_t recommended_axis_count(double length, double k, double q);

}  // namespace cohvort
