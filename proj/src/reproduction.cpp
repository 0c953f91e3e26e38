#include "cohvort/reproduction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace cohvort {

namespace {

// Largest relative deviation of consecutive detected positions from the
// expected lattice step. Pairs group by the exact analytic coordinate of the
// other axis, so only same-row or same-column neighbors are compared.
double max_spacing_deviation(const std::vector<VortexSite>& analytic,
                             const std::vector<VortexSite>& detected, const MatchReport& match,
                             double expected_step, bool along_x) {
  std::map<std::pair<int, double>, std::vector<std::pair<double, double>>> lanes;
  for (const MatchPair& pair : match.pairs) {
    const VortexSite& a = analytic[pair.analytic_index];
    const VortexSite& d = detected[pair.detected_index];
    const double lane_key = along_x ? a.xp : a.x;
    const double sort_key = along_x ? a.x : a.xp;
    const double position = along_x ? d.x : d.xp;
    lanes[{a.charge, lane_key}].emplace_back(sort_key, position);
  }
  double worst = 0.0;
  for (auto& [key, lane] : lanes) {
    std::sort(lane.begin(), lane.end());
    for (std::size_t n = 1; n < lane.size(); ++n) {
      const double spacing = lane[n].second - lane[n - 1].second;
      worst = std::max(worst, std::fabs(spacing - expected_step) / expected_step);
    }
  }
  return worst;
}

}  // namespace

LatticeRunReport run_step_lattice(const LatticeRunOptions& options) {
  if (!std::isfinite(options.energy) || !(options.energy > 0.0)) {
    throw std::invalid_argument("lattice run: energy must be positive");
  }
  if (!std::isfinite(options.v_over_e) || !(options.v_over_e > 0.0) ||
      !(options.v_over_e < 1.0)) {
    throw std::domain_error(
        "lattice run: v_over_e must lie in (0, 1) for a propagating, partly reflected wave");
  }
  if (!(options.window.x_max < 0.0) || !(options.window.xp_min > 0.0)) {
    throw std::invalid_argument("lattice run: window must lie in the quadrant x < 0 < x'");
  }

  const double energy = options.energy;
  const double height = options.v_over_e * energy;
  const double k = wavevector(energy, 0.0).real();
  const double q = wavevector(energy, height).real();

  const PotentialProfile profile = PotentialProfile::step(height);
  const Ensemble ensemble =
      two_member_mixture(profile, energy, options.weight_free, options.weight_scattered);
  const Axis x_axis(options.window.x_min, options.window.x_max, options.x_count);
  const Axis xp_axis(options.window.xp_min, options.window.xp_max, options.xp_count);

  LatticeRunReport report{.k = k, .q = q, .field = sample_grid(ensemble, x_axis, xp_axis)};
  report.detected = detect(report.field, ensemble, options.detect);

  std::vector<VortexSite> analytic = analytic_lattice(k, q, +1, options.window);
  const std::vector<VortexSite> conjugates = analytic_lattice(k, q, -1, options.window);
  analytic.insert(analytic.end(), conjugates.begin(), conjugates.end());
  std::sort(analytic.begin(), analytic.end(), [](const VortexSite& a, const VortexSite& b) {
    return a.x != b.x ? a.x < b.x : a.xp < b.xp;
  });
  report.analytic = std::move(analytic);

  report.match_tolerance = std::max(x_axis.spacing(), xp_axis.spacing());
  report.match = match_sites(report.analytic, report.detected, report.match_tolerance);

  report.x_spacing_expected = std::numbers::pi / k;
  report.xp_spacing_expected = 2.0 * std::numbers::pi / (k - q);
  report.x_spacing_max_rel_dev = max_spacing_deviation(
      report.analytic, report.detected, report.match, report.x_spacing_expected, true);
  report.xp_spacing_max_rel_dev = max_spacing_deviation(
      report.analytic, report.detected, report.match, report.xp_spacing_expected, false);

  report.residual_bound = options.detect.eps_zero_rel * report.field.max_abs();
  for (const VortexSite& site : report.analytic) {
    report.max_analytic_residual = std::max(report.max_analytic_residual, site.residual.value());
  }
  report.detected_converged = !report.detected.empty();
  for (const VortexSite& site : report.detected) {
    report.max_detected_residual = std::max(report.max_detected_residual, site.residual.value());
    report.detected_converged = report.detected_converged && site.converged;
    if (site.charge > 0) {
      ++report.vortex_count;
    } else {
      ++report.antivortex_count;
    }
  }

  report.all_analytic_matched = report.match.unmatched_analytic.empty();
  report.no_extra_detected = report.match.unmatched_detected.empty();
  report.x_spacing_ok = report.x_spacing_max_rel_dev <= options.spacing_rel_tol;
  report.xp_spacing_ok = report.xp_spacing_max_rel_dev <= options.spacing_rel_tol;
  report.analytic_residuals_ok = report.max_analytic_residual < report.residual_bound;
  return report;
}

}  // namespace cohvort
