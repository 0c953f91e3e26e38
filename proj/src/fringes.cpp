#include "cohvort/fringes.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cohvort/singularity.hpp"

namespace cohvort {

FringePattern pattern(const Ensemble& ensemble, double x, double xp, const Axis& screen) {
  const double ix = ensemble.intensity(x);
  const double ixp = ensemble.intensity(xp);
  if (!(ix > 0.0) || !(ixp > 0.0)) {
    std::ostringstream msg;
    msg << "fringes: slit at x = " << (ix > 0.0 ? xp : x) << " has no intensity";
    throw std::domain_error(msg.str());
  }
  const Complex g = degree_of_coherence(ensemble, x, xp);
  const double visibility = std::abs(g);
  const double offset = std::arg(g);
  const double amplitude = 2.0 * std::sqrt(ix) * std::sqrt(ixp) * visibility;

  FringePattern result;
  result.theta.resize(screen.count());
  result.intensity.resize(screen.count());
  for (std::size_t s = 0; s < screen.count(); ++s) {
    result.theta[s] = screen.at(s);
    result.intensity[s] = amplitude * std::cos(result.theta[s] + offset);
  }
  result.visibility = visibility;
  result.offset = offset;
  return result;
}

std::vector<LoopPoint> square_loop(double center_x, double center_xp, double half_side,
                                   std::size_t points_per_side) {
  if (!std::isfinite(center_x) || !std::isfinite(center_xp)) {
    throw std::invalid_argument("fringes: loop center must be finite");
  }
  if (!std::isfinite(half_side) || !(half_side > 0.0)) {
    throw std::invalid_argument("fringes: loop half side must be positive");
  }
  if (points_per_side == 0) {
    throw std::invalid_argument("fringes: loop needs at least one point per side");
  }
  const LoopPoint corners[4] = {{center_x - half_side, center_xp - half_side},
                                {center_x + half_side, center_xp - half_side},
                                {center_x + half_side, center_xp + half_side},
                                {center_x - half_side, center_xp + half_side}};
  std::vector<LoopPoint> loop;
  loop.reserve(4 * points_per_side + 1);
  for (std::size_t side = 0; side < 4; ++side) {
    const LoopPoint& from = corners[side];
    const LoopPoint& to = corners[(side + 1) % 4];
    for (std::size_t n = 0; n < points_per_side; ++n) {
      const double frac = static_cast<double>(n) / static_cast<double>(points_per_side);
      loop.push_back({from.x + frac * (to.x - from.x), from.xp + frac * (to.xp - from.xp)});
    }
  }
  loop.push_back(loop.front());
  return loop;
}

RatchetScan ratchet_scan(const Ensemble& ensemble, const std::vector<LoopPoint>& loop,
                         double eps_g) {
  if (!(eps_g > 0.0) || !std::isfinite(eps_g)) {
    throw std::invalid_argument("fringes: coherence threshold must be positive");
  }
  if (loop.size() < 4) {
    throw std::invalid_argument("fringes: loop needs at least four points");
  }
  if (loop.back().x != loop.front().x || loop.back().xp != loop.front().xp) {
    throw std::invalid_argument("fringes: loop must be closed (last point equal to the first)");
  }

  RatchetScan scan;
  scan.points = loop;
  scan.offsets.resize(loop.size());
  for (std::size_t n = 0; n < loop.size(); ++n) {
    const Complex g = degree_of_coherence(ensemble, loop[n].x, loop[n].xp);
    const double modulus = std::abs(g);
    if (!(modulus > eps_g)) {
      std::ostringstream msg;
      msg << "fringes: loop point " << n << " at (" << loop[n].x << ", " << loop[n].xp
          << ") touches a coherence zero (|g| = " << modulus << ")";
      throw std::runtime_error(msg.str());
    }
    scan.offsets[n] = std::arg(g);
  }

  scan.cumulative.resize(loop.size());
  scan.cumulative[0] = scan.offsets[0];
  for (std::size_t n = 1; n < loop.size(); ++n) {
    const double step = wrap_phase(scan.offsets[n] - scan.offsets[n - 1]);
    if (std::fabs(step) >= 0.99 * std::numbers::pi) {
      std::ostringstream msg;
      msg << "fringes: offset jumps by " << step << " between loop points " << n - 1 << " and "
          << n << "; sample the loop more densely";
      throw std::runtime_error(msg.str());
    }
    scan.cumulative[n] = scan.cumulative[n - 1] + step;
  }
  scan.total = scan.cumulative.back() - scan.cumulative.front();
  scan.winding = static_cast<int>(std::llround(scan.total / (2.0 * std::numbers::pi)));
  return scan;
}

}  // namespace cohvort
