#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>
#include <cstddef>

#include "cohvort/coherence.hpp"
#include "cohvort/potential.hpp"
#include "cohvort/singularity.hpp"

using namespace cohvort;

namespace {

Ensemble canonical_mixture() {
  return two_member_mixture(PotentialProfile::step(0.99), 1.0);
}

bool same_values(const CoherenceField& a, const CoherenceField& b) {
  if (!(a.x_axis() == b.x_axis()) || !(a.xp_axis() == b.xp_axis())) {
    return false;
  }
  return a.values() == b.values();
}

}  // namespace

TEST_CASE("parallel ensemble sampling matches the serial reference bitwise") {
  const Ensemble mixture = canonical_mixture();
  const Axis x_axis(-15.0, -0.01, 150);
  const Axis xp_axis(0.01, 15.0, 150);
  const CoherenceField parallel = sample_grid(mixture, x_axis, xp_axis);
  const CoherenceField serial = sample_grid_serial(mixture, x_axis, xp_axis);
  CHECK(same_values(parallel, serial));
}

TEST_CASE("parallel evaluator sampling matches the serial reference bitwise") {
  const FieldEvaluator evaluator = [](double x, double xp) {
    return analytic_step_G(1.0, 0.1, x - 16.0, xp + 0.5);
  };
  const Axis x_axis(0.0, 10.0, 97);
  const Axis xp_axis(0.0, 10.0, 113);
  const CoherenceField parallel = sample_grid(evaluator, x_axis, xp_axis);
  const CoherenceField serial = sample_grid_serial(evaluator, x_axis, xp_axis);
  CHECK(same_values(parallel, serial));
}

TEST_CASE("parallel winding maps match the serial reference exactly") {
  const Ensemble mixture = canonical_mixture();
  const Axis x_axis(-15.0, -0.01, 150);
  const Axis xp_axis(0.01, 15.0, 150);
  const CoherenceField field = sample_grid(mixture, x_axis, xp_axis);
  const WindingMap parallel = winding_map(field);
  const WindingMap serial = winding_map_serial(field);
  CHECK(parallel == serial);
  CHECK(parallel.total_charge() == serial.total_charge());
}

TEST_CASE("repeated sampling runs are bitwise deterministic") {
  const Ensemble mixture = canonical_mixture();
  const Axis x_axis(-8.0, -0.1, 120);
  const Axis xp_axis(0.1, 8.0, 120);
  const CoherenceField first = sample_grid(mixture, x_axis, xp_axis);
  const CoherenceField second = sample_grid(mixture, x_axis, xp_axis);
  CHECK(same_values(first, second));

  const CoherenceField normalized_first = normalize(mixture, first);
  const CoherenceField normalized_second = normalize(mixture, second);
  CHECK(same_values(normalized_first, normalized_second));
}
