#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "cohvort/coherence.hpp"
#include "cohvort/singularity.hpp"

using namespace cohvort;

namespace {

constexpr double kPi = std::numbers::pi;

/// Simple charge +1 singularity at (a, b): G = (x - a) + i(x' - b).
FieldEvaluator point_vortex(double a, double b) {
  return [a, b](double x, double xp) { return Complex(x - a, xp - b); };
}

CoherenceField four_corner_field(Complex c00, Complex c10, Complex c11, Complex c01) {
  const Axis axis(0.0, 1.0, 2);
  return CoherenceField(axis, axis, {c00, c01, c10, c11});
}

}  // namespace

TEST_CASE("phase wrapping lands in the principal interval") {
  CHECK(wrap_phase(0.0) == 0.0);
  CHECK(wrap_phase(0.1) == 0.1);
  CHECK(wrap_phase(-0.1) == -0.1);
  CHECK(std::abs(wrap_phase(2.0 * kPi + 0.3) - 0.3) < 1e-15);
  CHECK(std::abs(wrap_phase(-6.0 * kPi - 0.2) + 0.2) < 1e-14);
  CHECK(std::abs(wrap_phase(kPi + 0.2) - (0.2 - kPi)) < 1e-15);

  for (double delta = -20.0; delta <= 20.0; delta += 0.173) {
    const double wrapped = wrap_phase(delta);
    CHECK(wrapped > -kPi);
    CHECK(wrapped <= kPi);
    const double turns = (delta - wrapped) / (2.0 * kPi);
    CHECK(std::abs(turns - std::round(turns)) < 1e-9);
  }
}

TEST_CASE("a single plaquette reads off the winding of its corners") {
  const Complex one(1.0, 0.0);
  const Complex i_unit(0.0, 1.0);

  const CoherenceField positive = four_corner_field(one, i_unit, -one, -i_unit);
  CHECK(plaquette_winding(positive, 0, 0) == 1);

  const CoherenceField negative = four_corner_field(one, -i_unit, -one, i_unit);
  CHECK(plaquette_winding(negative, 0, 0) == -1);

  const CoherenceField flat = four_corner_field(one, one, one, one);
  CHECK(plaquette_winding(flat, 0, 0) == 0);

  const CoherenceField pinched = four_corner_field(one, Complex(0.0, 0.0), -one, -i_unit);
  CHECK_FALSE(plaquette_winding(pinched, 0, 0).has_value());

  const CoherenceField faint = four_corner_field(one, Complex(1e-6, 0.0), -one, -i_unit);
  CHECK_FALSE(plaquette_winding(faint, 0, 0, 1e-3).has_value());
  CHECK(plaquette_winding(faint, 0, 0, 1e-9).has_value());
}

TEST_CASE("winding map pins a synthetic vortex to one cell") {
  const Axis axis(-1.0, 1.0, 21);
  const double a = 0.037;
  const double b = -0.118;
  const CoherenceField field = sample_grid(point_vortex(a, b), axis, axis);
  const WindingMap map = winding_map(field);

  CHECK(map.total_charge() == 1);
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < map.x_cells(); ++i) {
    for (std::size_t j = 0; j < map.xp_cells(); ++j) {
      if (map.at(i, j) == WindingMap::kIndeterminate) {
        continue;
      }
      if (map.at(i, j) != 0) {
        ++nonzero;
        CHECK(map.at(i, j) == 1);
        CHECK(axis.at(i) <= a);
        CHECK(a <= axis.at(i + 1));
        CHECK(axis.at(j) <= b);
        CHECK(b <= axis.at(j + 1));
      }
    }
  }
  CHECK(nonzero == 1);
}

TEST_CASE("conjugation and transposition each flip the winding") {
  const Axis axis(-1.0, 1.0, 21);
  const FieldEvaluator forward = point_vortex(0.237, -0.318);

  const FieldEvaluator conjugated = [&forward](double x, double xp) {
    return std::conj(forward(x, xp));
  };
  CHECK(winding_map(sample_grid(conjugated, axis, axis)).total_charge() == -1);

  const FieldEvaluator transposed = [&forward](double x, double xp) {
    return forward(xp, x);
  };
  CHECK(winding_map(sample_grid(transposed, axis, axis)).total_charge() == -1);

  // Their composition is the hermitian mirror, which keeps the charge; this
  // is what lets one correlation field be its own conjugate transpose.
  const FieldEvaluator mirrored = [&forward](double x, double xp) {
    return std::conj(forward(xp, x));
  };
  CHECK(winding_map(sample_grid(mirrored, axis, axis)).total_charge() == 1);
}

TEST_CASE("contour circulation equals the sum of enclosed plaquettes") {
  const Axis axis(-1.0, 1.0, 25);
  const FieldEvaluator pair = [](double x, double xp) {
    const Complex plus = Complex(x - 0.403, xp - 0.311);
    const Complex minus = std::conj(Complex(x + 0.513, xp + 0.409));
    return plus * minus;
  };
  const CoherenceField field = sample_grid(pair, axis, axis);
  const WindingMap map = winding_map(field);
  CHECK(map.total_charge() == 0);

  const std::vector<CellRect> rects = {
      {0, 0, 23, 23}, {12, 12, 23, 23}, {0, 0, 11, 11}, {3, 7, 19, 22}, {5, 5, 5, 5}};
  for (const CellRect& rect : rects) {
    const auto circulation = contour_circulation(field, rect);
    REQUIRE(circulation.has_value());
    long enclosed = 0;
    for (std::size_t i = rect.i0; i <= rect.i1; ++i) {
      for (std::size_t j = rect.j0; j <= rect.j1; ++j) {
        enclosed += map.at(i, j);
      }
    }
    CHECK(*circulation == enclosed);
  }
}

TEST_CASE("newton refinement lands on the zero of a linear vortex") {
  const FieldEvaluator vortex = point_vortex(0.3, -0.2);
  const Window bounds{-1.0, 1.0, -1.0, 1.0};
  const RefineResult result = refine_zero(vortex, bounds, 0.0, 0.0);
  CHECK(std::abs(result.x - 0.3) < 1e-9);
  CHECK(std::abs(result.xp + 0.2) < 1e-9);
  CHECK(result.residual < 1e-10);
}

TEST_CASE("refinement falls back to coordinate descent on a singular jacobian") {
  const FieldEvaluator quartic = [](double x, double xp) {
    return Complex(x * x - 0.25, xp * xp - 0.09);
  };
  const Window bounds{0.0, 1.0, 0.0, 1.0};
  const RefineResult result = refine_zero(quartic, bounds, 0.0, 0.0);
  CHECK(std::abs(result.x - 0.5) < 1e-7);
  CHECK(std::abs(result.xp - 0.3) < 1e-7);
  CHECK(result.residual < 1e-8);
}

TEST_CASE("detection refines the synthetic vortex to machine residual") {
  const Axis axis(-1.0, 1.0, 21);
  const double a = 0.037;
  const double b = -0.118;
  const FieldEvaluator vortex = point_vortex(a, b);
  const CoherenceField field = sample_grid(vortex, axis, axis);
  const std::vector<VortexSite> sites = detect(field, vortex);

  REQUIRE(sites.size() == 1);
  CHECK(sites[0].charge == 1);
  CHECK(sites[0].source == SiteSource::kDetected);
  CHECK(sites[0].converged);
  REQUIRE(sites[0].cell.has_value());
  REQUIRE(sites[0].residual.has_value());
  CHECK(std::abs(sites[0].x - a) < 1e-8);
  CHECK(std::abs(sites[0].xp - b) < 1e-8);
  CHECK(*sites[0].residual < 1e-10);
}

TEST_CASE("angle shifts reproduce pinned values for the reference step") {
  const double t = 20.0 / 11.0;
  const double r = 9.0 / 11.0;

  const AngleShifts plus = angle_shifts(t, r, +1);
  CHECK(plus.alpha == doctest::Approx(2.1840434340279951).epsilon(1e-14));
  CHECK(plus.beta == doctest::Approx(4.7435923907937224).epsilon(1e-14));

  const AngleShifts minus = angle_shifts(t, r, -1);
  CHECK(minus.alpha == doctest::Approx(-4.0991418731515913).epsilon(1e-14));
  CHECK(minus.beta == doctest::Approx(-1.539592916385864).epsilon(1e-14));
}

TEST_CASE("angle shifts close the phasor triangle they came from") {
  const double t = 20.0 / 11.0;
  const double r = 9.0 / 11.0;
  for (int charge : {+1, -1}) {
    const AngleShifts shifts = angle_shifts(t, r, charge);
    const double pi_over_p = kPi / charge;
    CHECK(std::cos(pi_over_p - shifts.alpha) ==
          doctest::Approx((1.0 + t * t - t * t * r * r) / (2.0 * t)).epsilon(1e-13));
    CHECK(std::cos(shifts.beta - pi_over_p) ==
          doctest::Approx((1.0 - t * t + t * t * r * r) / (2.0 * t * r)).epsilon(1e-13));
  }
}

TEST_CASE("angle shifts reject unusable inputs") {
  CHECK_THROWS_AS(angle_shifts(1.8, 0.8, 0), std::invalid_argument);
  CHECK_THROWS_AS(angle_shifts(1.8, 0.8, 2), std::invalid_argument);
  CHECK_THROWS_AS(angle_shifts(0.0, 0.8, 1), std::domain_error);
  CHECK_THROWS_AS(angle_shifts(1.8, 0.0, 1), std::domain_error);
  CHECK_THROWS_AS(angle_shifts(0.5, 0.1, 1), std::domain_error);
}

TEST_CASE("the closed-form lattice lands on pinned reference sites") {
  const Window window{-15.0, -0.01, 0.01, 15.0};

  const std::vector<double> x_plus = {-14.428188789566103, -11.286596135976309,
                                      -8.1450034823865161, -5.0034108287967228,
                                      -1.8618181752069296};
  const std::vector<double> xp_plus = {4.5546020812795459, 11.535919089256864};
  const std::vector<VortexSite> plus = analytic_lattice(1.0, 0.1, +1, window);
  REQUIRE(plus.size() == x_plus.size() * xp_plus.size());
  std::size_t index = 0;
  for (double x : x_plus) {
    for (double xp : xp_plus) {
      CHECK(plus[index].x == doctest::Approx(x).epsilon(1e-12));
      CHECK(plus[index].xp == doctest::Approx(xp).epsilon(1e-12));
      CHECK(plus[index].charge == 1);
      CHECK(plus[index].source == SiteSource::kAnalytic);
      CHECK(plus[index].converged);
      ++index;
    }
  }

  const std::vector<double> x_minus = {-13.846145092742037, -10.704552439152243,
                                       -7.5629597855624501, -4.4213671319726569,
                                       -1.2797744783828636};
  const std::vector<double> xp_minus = {2.4267149266977724, 9.4080319346750907};
  const std::vector<VortexSite> minus = analytic_lattice(1.0, 0.1, -1, window);
  REQUIRE(minus.size() == x_minus.size() * xp_minus.size());
  index = 0;
  for (double x : x_minus) {
    for (double xp : xp_minus) {
      CHECK(minus[index].x == doctest::Approx(x).epsilon(1e-12));
      CHECK(minus[index].xp == doctest::Approx(xp).epsilon(1e-12));
      CHECK(minus[index].charge == -1);
      ++index;
    }
  }
}

TEST_CASE("lattice sites are genuine zeros of the closed-form correlation") {
  const Window window{-15.0, -0.01, 0.01, 15.0};
  for (int charge : {+1, -1}) {
    for (const VortexSite& site : analytic_lattice(1.0, 0.1, charge, window)) {
      REQUIRE(site.residual.has_value());
      CHECK(std::abs(analytic_step_G(1.0, 0.1, site.x, site.xp)) < 1e-12);
      CHECK(*site.residual < 1e-12);
    }
  }
}

TEST_CASE("lattice spacings follow the two wavenumbers") {
  const Window window{-15.0, -0.01, 0.01, 15.0};
  const std::vector<VortexSite> sites = analytic_lattice(1.0, 0.1, +1, window);
  std::vector<double> xs;
  std::vector<double> xps;
  for (const VortexSite& site : sites) {
    xs.push_back(site.x);
    xps.push_back(site.xp);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(xps.begin(), xps.end());
  xps.erase(std::unique(xps.begin(), xps.end()), xps.end());
  for (std::size_t i = 1; i < xs.size(); ++i) {
    CHECK(xs[i] - xs[i - 1] == doctest::Approx(kPi).epsilon(1e-12));
  }
  for (std::size_t i = 1; i < xps.size(); ++i) {
    CHECK(xps[i] - xps[i - 1] == doctest::Approx(2.0 * kPi / 0.9).epsilon(1e-12));
  }
}

TEST_CASE("the lattice disappears when nothing reflects") {
  const Window window{-15.0, -0.01, 0.01, 15.0};
  CHECK_THROWS_AS(analytic_lattice(1.0, 1.0, +1, window), std::domain_error);
  CHECK_THROWS_AS(analytic_lattice(0.0, 0.1, +1, window), std::invalid_argument);
  CHECK_THROWS_AS(analytic_lattice(1.0, 0.1, +1, Window{1.0, -1.0, 0.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("a downhill step closes no phasor triangle and hence no lattice") {
  const Window window{-15.0, -0.01, 0.01, 15.0};
  CHECK_THROWS_AS(analytic_lattice(1.0, 1.8, +1, window), std::domain_error);
}

TEST_CASE("detection recovers the closed-form lattice on a reduced window") {
  const double k = 1.0;
  const double q = 0.1;
  const Window window{-7.0, -0.01, 0.01, 7.0};
  const FieldEvaluator closed = [k, q](double x, double xp) {
    return analytic_step_G(k, q, x, xp);
  };
  const Axis x_axis(window.x_min, window.x_max, 180);
  const Axis xp_axis(window.xp_min, window.xp_max, 180);
  const CoherenceField field = sample_grid(closed, x_axis, xp_axis);
  const std::vector<VortexSite> detected = detect(field, closed);

  std::vector<VortexSite> expected = analytic_lattice(k, q, +1, window);
  const std::vector<VortexSite> negative = analytic_lattice(k, q, -1, window);
  expected.insert(expected.end(), negative.begin(), negative.end());
  REQUIRE(detected.size() == expected.size());

  const double tolerance = std::max(x_axis.spacing(), xp_axis.spacing());
  const MatchReport report = match_sites(expected, detected, tolerance);
  CHECK(report.pairs.size() == expected.size());
  CHECK(report.unmatched_analytic.empty());
  CHECK(report.unmatched_detected.empty());
  for (const VortexSite& site : detected) {
    CHECK(site.converged);
  }
}

TEST_CASE("site matching pairs by charge within the tolerance") {
  std::vector<VortexSite> analytic(2);
  analytic[0].x = 0.0;
  analytic[0].xp = 0.0;
  analytic[0].charge = 1;
  analytic[1].x = 1.0;
  analytic[1].xp = 0.0;
  analytic[1].charge = -1;

  std::vector<VortexSite> detected(3);
  detected[0].x = 1e-12;
  detected[0].xp = 0.0;
  detected[0].charge = 1;
  detected[1].x = 1.0;
  detected[1].xp = 1e-12;
  detected[1].charge = -1;
  detected[2].x = 5.0;
  detected[2].xp = 5.0;
  detected[2].charge = 1;

  const MatchReport report = match_sites(analytic, detected, 1e-3);
  CHECK(report.pairs.size() == 2);
  CHECK(report.unmatched_analytic.empty());
  REQUIRE(report.unmatched_detected.size() == 1);
  CHECK(report.unmatched_detected[0] == 2);
  CHECK(report.max_distance < 1e-11);

  std::vector<VortexSite> flipped = detected;
  flipped.resize(1);
  flipped[0].charge = -1;
  const MatchReport mismatch = match_sites({analytic[0]}, flipped, 1e-3);
  CHECK(mismatch.pairs.empty());
  CHECK(mismatch.unmatched_analytic.size() == 1);
  CHECK(mismatch.unmatched_detected.size() == 1);
}

TEST_CASE("grid heuristics resolve the shortest phase period") {
  CHECK(shortest_phase_period(1.0, 0.1) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(shortest_phase_period(0.1, 1.0) == doctest::Approx(2.0 * kPi / 0.9).epsilon(1e-15));
  CHECK(shortest_phase_period(1.0, 1.0) == doctest::Approx(kPi).epsilon(1e-15));

  for (double length : {1.0, 15.0, 100.0}) {
    const std::size_t count = recommended_axis_count(length, 1.0, 0.1);
    CHECK(count >= 2);
    const double spacing = length / static_cast<double>(count - 1);
    CHECK(spacing <= shortest_phase_period(1.0, 0.1) / 8.0 + 1e-12);
  }
}

TEST_CASE("winding map total skips indeterminate cells") {
  WindingMap map(2, 2);
  map.set(0, 0, 1);
  map.set(0, 1, WindingMap::kIndeterminate);
  map.set(1, 0, -1);
  map.set(1, 1, 1);
  CHECK(map.total_charge() == 1);
}
