#include "cohvort/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace cohvort {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double resolve_eps(const CoherenceField& field, double eps_abs) {
  if (eps_abs >= 0.0) {
    return eps_abs;
  }
  return DetectOptions{}.eps_g_rel * field.max_abs();
}

bool corner_usable(Complex value, double eps_abs) {
  const double a = std::abs(value);
  return std::isfinite(a) && a > eps_abs;
}

int cell_winding(double p00, double p10, double p11, double p01) {
  const double sum = wrap_phase(p10 - p00) + wrap_phase(p11 - p10) + wrap_phase(p01 - p11) +
                     wrap_phase(p00 - p01);
  return static_cast<int>(std::llround(sum / kTwoPi));
}

void validate_options(const DetectOptions& options) {
  if (!(options.eps_g_rel > 0.0) || !(options.eps_zero_rel > 0.0) ||
      !(options.position_tol > 0.0) || options.max_iterations == 0) {
    throw std::invalid_argument("singularity: detection thresholds must be positive");
  }
}

WindingMap winding_map_impl(const CoherenceField& field, const DetectOptions& options,
                            bool parallel) {
  validate_options(options);
  const std::size_t nx = field.x_count();
  const std::size_t nxp = field.xp_count();
  const double eps_abs = options.eps_g_rel * field.max_abs();

  std::vector<double> phase(nx * nxp, 0.0);
  std::vector<std::uint8_t> usable(nx * nxp, 0);
  const std::ptrdiff_t points = static_cast<std::ptrdiff_t>(nx * nxp);
#pragma omp parallel for if (parallel) schedule(static)
  for (std::ptrdiff_t idx = 0; idx < points; ++idx) {
    const Complex v = field.values()[static_cast<std::size_t>(idx)];
    if (corner_usable(v, eps_abs)) {
      usable[static_cast<std::size_t>(idx)] = 1;
      phase[static_cast<std::size_t>(idx)] = std::arg(v);
    }
  }

  WindingMap map(nx - 1, nxp - 1);
  const std::ptrdiff_t cells_x = static_cast<std::ptrdiff_t>(nx - 1);
  const std::ptrdiff_t cells_xp = static_cast<std::ptrdiff_t>(nxp - 1);
#pragma omp parallel for if (parallel) schedule(static)
  for (std::ptrdiff_t i = 0; i < cells_x; ++i) {
    for (std::ptrdiff_t j = 0; j < cells_xp; ++j) {
      const std::size_t i00 = static_cast<std::size_t>(i) * nxp + static_cast<std::size_t>(j);
      const std::size_t i10 = i00 + nxp;
      const std::size_t i01 = i00 + 1;
      const std::size_t i11 = i10 + 1;
      if (!(usable[i00] && usable[i10] && usable[i11] && usable[i01])) {
        map.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                WindingMap::kIndeterminate);
        continue;
      }
      const int w = cell_winding(phase[i00], phase[i10], phase[i11], phase[i01]);
      map.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j),
              static_cast<std::int8_t>(w));
    }
  }
  return map;
}

}  // namespace

double wrap_phase(double delta) {
  double w = std::remainder(delta, kTwoPi);
  if (w <= -std::numbers::pi) {
    w += kTwoPi;
  }
  return w;
}

WindingMap::WindingMap(std::size_t x_cells, std::size_t xp_cells)
    : x_cells_(x_cells), xp_cells_(xp_cells), values_(x_cells * xp_cells, 0) {
  if (x_cells_ == 0 || xp_cells_ == 0) {
    throw std::invalid_argument("singularity: winding map needs at least one cell per axis");
  }
}

long WindingMap::total_charge() const {
  long total = 0;
  for (const std::int8_t w : values_) {
    if (w != kIndeterminate) {
      total += w;
    }
  }
  return total;
}

std::optional<int> plaquette_winding(const CoherenceField& field, std::size_t i, std::size_t j,
                                     double eps_abs) {
  if (i + 1 >= field.x_count() || j + 1 >= field.xp_count()) {
    throw std::invalid_argument("singularity: plaquette indices outside the grid");
  }
  const double eps = resolve_eps(field, eps_abs);
  const Complex v00 = field.at(i, j);
  const Complex v10 = field.at(i + 1, j);
  const Complex v11 = field.at(i + 1, j + 1);
  const Complex v01 = field.at(i, j + 1);
  if (!corner_usable(v00, eps) || !corner_usable(v10, eps) || !corner_usable(v11, eps) ||
      !corner_usable(v01, eps)) {
    return std::nullopt;
  }
  return cell_winding(std::arg(v00), std::arg(v10), std::arg(v11), std::arg(v01));
}

std::optional<int> contour_circulation(const CoherenceField& field, const CellRect& rect,
                                       double eps_abs) {
  if (rect.i1 < rect.i0 || rect.j1 < rect.j0) {
    return 0;
  }
  if (rect.i1 + 1 >= field.x_count() || rect.j1 + 1 >= field.xp_count()) {
    throw std::invalid_argument("singularity: contour rectangle outside the grid");
  }
  const double eps = resolve_eps(field, eps_abs);

  std::vector<std::pair<std::size_t, std::size_t>> path;
  for (std::size_t i = rect.i0; i <= rect.i1 + 1; ++i) {
    path.emplace_back(i, rect.j0);
  }
  for (std::size_t j = rect.j0 + 1; j <= rect.j1 + 1; ++j) {
    path.emplace_back(rect.i1 + 1, j);
  }
  for (std::size_t i = rect.i1 + 1; i-- > rect.i0;) {
    path.emplace_back(i, rect.j1 + 1);
  }
  for (std::size_t j = rect.j1 + 1; j-- > rect.j0 + 1;) {
    path.emplace_back(rect.i0, j);
  }
  path.emplace_back(rect.i0, rect.j0);

  double previous = 0.0;
  double sum = 0.0;
  for (std::size_t n = 0; n < path.size(); ++n) {
    const Complex v = field.at(path[n].first, path[n].second);
    if (!corner_usable(v, eps)) {
      return std::nullopt;
    }
    const double phase = std::arg(v);
    if (n > 0) {
      sum += wrap_phase(phase - previous);
    }
    previous = phase;
  }
  return static_cast<int>(std::llround(sum / kTwoPi));
}

WindingMap winding_map(const CoherenceField& field, const DetectOptions& options) {
  return winding_map_impl(field, options, true);
}

WindingMap winding_map_serial(const CoherenceField& field, const DetectOptions& options) {
  return winding_map_impl(field, options, false);
}

RefineResult refine_zero(const FieldEvaluator& evaluator, const Window& bounds, double x0,
                         double xp0, const DetectOptions& options) {
  if (!evaluator) {
    throw std::invalid_argument("singularity: evaluator must be callable");
  }
  validate_options(options);
  if (!(bounds.x_min < bounds.x_max) || !(bounds.xp_min < bounds.xp_max)) {
    throw std::invalid_argument("singularity: refinement bounds must be ordered");
  }

  const auto clamp_x = [&](double v) { return std::clamp(v, bounds.x_min, bounds.x_max); };
  const auto clamp_xp = [&](double v) { return std::clamp(v, bounds.xp_min, bounds.xp_max); };
  double x = clamp_x(x0);
  double xp = clamp_xp(xp0);
  const double hx = 1e-4 * (bounds.x_max - bounds.x_min);
  const double hxp = 1e-4 * (bounds.xp_max - bounds.xp_min);

  std::size_t iterations = 0;
  bool settled = false;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    ++iterations;
    const Complex g0 = evaluator(x, xp);
    if (std::abs(g0) == 0.0) {
      settled = true;
      break;
    }
    const Complex gx = (evaluator(x + hx, xp) - evaluator(x - hx, xp)) / (2.0 * hx);
    const Complex gxp = (evaluator(x, xp + hxp) - evaluator(x, xp - hxp)) / (2.0 * hxp);
    const double det = gx.real() * gxp.imag() - gx.imag() * gxp.real();
    const double det_scale = std::abs(gx) * std::abs(gxp) + 1e-300;
    if (!(std::abs(det) > 1e-12 * det_scale)) {
      break;
    }
    const double dx = (g0.imag() * gxp.real() - g0.real() * gxp.imag()) / det;
    const double dxp = (g0.real() * gx.imag() - g0.imag() * gx.real()) / det;
    x = clamp_x(x + dx);
    xp = clamp_xp(xp + dxp);
    if (std::abs(dx) <= options.position_tol && std::abs(dxp) <= options.position_tol) {
      settled = true;
      break;
    }
  }

  if (!settled) {
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    const auto line_min = [&](double lo, double hi, const auto& f) {
      double a = lo, b = hi;
      double c = b - golden * (b - a);
      double d = a + golden * (b - a);
      double fc = f(c), fd = f(d);
      while (b - a > options.position_tol) {
        if (fc < fd) {
          b = d;
          d = c;
          fd = fc;
          c = b - golden * (b - a);
          fc = f(c);
        } else {
          a = c;
          c = d;
          fc = fd;
          d = a + golden * (b - a);
          fd = f(d);
        }
      }
      return 0.5 * (a + b);
    };
    for (int sweep = 0; sweep < 12; ++sweep) {
      x = line_min(bounds.x_min, bounds.x_max,
                   [&](double v) { return std::abs(evaluator(v, xp)); });
      xp = line_min(bounds.xp_min, bounds.xp_max,
                    [&](double v) { return std::abs(evaluator(x, v)); });
    }
  }

  return {x, xp, std::abs(evaluator(x, xp)), iterations};
}

std::vector<VortexSite> detect(const CoherenceField& field, const FieldEvaluator& evaluator,
                               const DetectOptions& options) {
  if (!evaluator) {
    throw std::invalid_argument("singularity: evaluator must be callable");
  }
  const WindingMap map = winding_map(field, options);
  const double eps_zero_abs = options.eps_zero_rel * field.max_abs();
  const Axis& ax = field.x_axis();
  const Axis& axp = field.xp_axis();

  std::vector<VortexSite> sites;
  for (std::size_t i = 0; i < map.x_cells(); ++i) {
    for (std::size_t j = 0; j < map.xp_cells(); ++j) {
      const std::int8_t w = map.at(i, j);
      if (w == WindingMap::kIndeterminate || w == 0) {
        continue;
      }
      // The zero may sit on a cell edge, so allow a quarter-cell overshoot.
      const Window bounds{ax.at(i) - 0.25 * ax.spacing(), ax.at(i + 1) + 0.25 * ax.spacing(),
                          axp.at(j) - 0.25 * axp.spacing(),
                          axp.at(j + 1) + 0.25 * axp.spacing()};
      const RefineResult refined =
          refine_zero(evaluator, bounds, 0.5 * (ax.at(i) + ax.at(i + 1)),
                      0.5 * (axp.at(j) + axp.at(j + 1)), options);
      VortexSite site;
      site.x = refined.x;
      site.xp = refined.xp;
      site.charge = w;
      site.source = SiteSource::kDetected;
      site.cell = std::array<std::size_t, 2>{i, j};
      site.residual = refined.residual;
      site.converged = refined.residual < eps_zero_abs;
      sites.push_back(site);
    }
  }
  std::sort(sites.begin(), sites.end(), [](const VortexSite& a, const VortexSite& b) {
    return a.x != b.x ? a.x < b.x : a.xp < b.xp;
  });
  return sites;
}

std::vector<VortexSite> detect(const CoherenceField& field, const Ensemble& ensemble,
                               const DetectOptions& options) {
  return detect(
      field, [&ensemble](double x, double xp) { return ensemble.correlation(x, xp); }, options);
}

AngleShifts angle_shifts(double transmission, double reflection, int charge) {
  if (charge != 1 && charge != -1) {
    throw std::invalid_argument("singularity: charge must be +1 or -1");
  }
  if (!std::isfinite(transmission) || !std::isfinite(reflection)) {
    throw std::invalid_argument("singularity: step coefficients must be finite");
  }
  if (transmission == 0.0 || reflection == 0.0) {
    throw std::domain_error("singularity: zero lattice needs nonzero transmission and reflection");
  }
  const double t2 = transmission * transmission;
  const double tr2 = t2 * reflection * reflection;
  const double slack = 1e-12;
  const auto checked_acos = [&](double arg, const char* name) {
    if (!(arg >= -1.0 - slack) || !(arg <= 1.0 + slack)) {
      std::ostringstream msg;
      msg << "singularity: " << name << " arccos argument " << arg << " lies outside [-1, 1]";
      throw std::domain_error(msg.str());
    }
    return std::acos(std::clamp(arg, -1.0, 1.0));
  };
  const double alpha_arc = checked_acos((1.0 + t2 - tr2) / (2.0 * transmission), "alpha");
  const double beta_arc =
      checked_acos((1.0 - t2 + tr2) / (2.0 * transmission * reflection), "beta");
  const double pi_over_p = std::numbers::pi / static_cast<double>(charge);
  return {pi_over_p - alpha_arc, pi_over_p + beta_arc, charge};
}

std::vector<VortexSite> analytic_lattice(double k, double q, int charge, const Window& window) {
  if (!std::isfinite(k) || !(k > 0.0) || !std::isfinite(q) || q < 0.0) {
    throw std::invalid_argument("singularity: lattice needs k > 0 and q >= 0");
  }
  if (k == q) {
    throw std::domain_error("singularity: no zero lattice for k = q (nothing reflects)");
  }
  if (!std::isfinite(window.x_min) || !std::isfinite(window.x_max) ||
      !std::isfinite(window.xp_min) || !std::isfinite(window.xp_max) ||
      !(window.x_min <= window.x_max) || !(window.xp_min <= window.xp_max)) {
    throw std::invalid_argument("singularity: window bounds must be finite and ordered");
  }

  const double t = 2.0 * k / (k + q);
  const double r = (k - q) / (k + q);
  const AngleShifts shifts = angle_shifts(t, r, charge);
  const double p = static_cast<double>(charge);
  const double x_base = p * (shifts.beta - shifts.alpha) / (2.0 * k);
  const double x_step = std::numbers::pi / k;
  const double xp_base = -p * shifts.alpha / (k - q);
  const double xp_step = kTwoPi / (k - q);

  const auto index_range = [](double base, double step, double lo,
                              double hi) -> std::pair<long long, long long> {
    double a = (lo - base) / step;
    double b = (hi - base) / step;
    if (a > b) {
      std::swap(a, b);
    }
    if (!(std::fabs(a) < 1e12) || !(std::fabs(b) < 1e12)) {
      throw std::invalid_argument("singularity: window spans too many lattice periods");
    }
    return {std::llround(std::floor(a)) - 1, std::llround(std::ceil(b)) + 1};
  };
  const auto [u_lo, u_hi] = index_range(x_base, -x_step, window.x_min, window.x_max);
  const auto [v_lo, v_hi] = index_range(xp_base, xp_step, window.xp_min, window.xp_max);

  std::vector<VortexSite> sites;
  for (long long u = u_lo; u <= u_hi; ++u) {
    const double x = x_base - static_cast<double>(u) * x_step;
    if (!(x >= window.x_min && x <= window.x_max && x < 0.0)) {
      continue;
    }
    for (long long v = v_lo; v <= v_hi; ++v) {
      const double xp = xp_base + static_cast<double>(v) * xp_step;
      if (!(xp >= window.xp_min && xp <= window.xp_max && xp > 0.0)) {
        continue;
      }
      VortexSite site;
      site.x = x;
      site.xp = xp;
      site.charge = charge;
      site.source = SiteSource::kAnalytic;
      site.residual = std::abs(analytic_step_G(k, q, x, xp));
      site.converged = true;
      sites.push_back(site);
    }
  }
  std::sort(sites.begin(), sites.end(), [](const VortexSite& a, const VortexSite& b) {
    return a.x != b.x ? a.x < b.x : a.xp < b.xp;
  });
  return sites;
}

MatchReport match_sites(const std::vector<VortexSite>& analytic,
                        const std::vector<VortexSite>& detected, double tolerance) {
  if (!std::isfinite(tolerance) || !(tolerance > 0.0)) {
    throw std::invalid_argument("singularity: match tolerance must be positive");
  }
  MatchReport report;
  std::vector<bool> claimed(detected.size(), false);
  for (std::size_t a = 0; a < analytic.size(); ++a) {
    std::size_t best = detected.size();
    double best_distance = tolerance;
    for (std::size_t d = 0; d < detected.size(); ++d) {
      if (claimed[d] || detected[d].charge != analytic[a].charge) {
        continue;
      }
      const double distance =
          std::hypot(detected[d].x - analytic[a].x, detected[d].xp - analytic[a].xp);
      if (distance <= best_distance) {
        best_distance = distance;
        best = d;
      }
    }
    if (best == detected.size()) {
      report.unmatched_analytic.push_back(a);
      continue;
    }
    claimed[best] = true;
    report.pairs.push_back({a, best, best_distance});
    report.max_distance = std::max(report.max_distance, best_distance);
  }
  for (std::size_t d = 0; d < detected.size(); ++d) {
    if (!claimed[d]) {
      report.unmatched_detected.push_back(d);
    }
  }
  return report;
}

double shortest_phase_period(double k, double q) {
  if (!std::isfinite(k) || !(k > 0.0) || !std::isfinite(q) || q < 0.0) {
    throw std::invalid_argument("singularity: period needs k > 0 and q >= 0");
  }
  const double axis_period = std::numbers::pi / k;
  if (k == q) {
    return axis_period;
  }
  return std::min(axis_period, kTwoPi / std::fabs(k - q));
}

std::size_t recommended_axis_count(double length, double k, double q) {
  if (!std::isfinite(length) || !(length > 0.0)) {
    throw std::invalid_argument("singularity: axis length must be positive");
  }
  const double samples = std::ceil(8.0 * length / shortest_phase_period(k, q));
  return static_cast<std::size_t>(std::max(1.0, samples)) + 1;
}

}  // namespace cohvort
