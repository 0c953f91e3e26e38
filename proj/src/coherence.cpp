#include "cohvort/coherence.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace cohvort {

namespace {

// Shared by the scalar, serial, and parallel paths so they agree bitwise.
inline Complex accumulate_cell(const std::vector<double>& weights,
                               const std::vector<std::vector<Complex>>& x_values,
                               const std::vector<std::vector<Complex>>& xp_values,
                               std::size_t i, std::size_t j) {
  Complex acc(0.0, 0.0);
  for (std::size_t m = 0; m < weights.size(); ++m) {
    acc += weights[m] * (std::conj(x_values[m][i]) * xp_values[m][j]);
  }
  return acc;
}

CoherenceField sample_members(const Ensemble& ensemble, const Axis& x_axis, const Axis& xp_axis,
                              bool parallel) {
  const auto& members = ensemble.members();
  std::vector<double> weights(members.size());
  std::vector<std::vector<Complex>> x_values(members.size());
  std::vector<std::vector<Complex>> xp_values(members.size());
  for (std::size_t m = 0; m < members.size(); ++m) {
    weights[m] = members[m].weight();
    x_values[m].resize(x_axis.count());
    xp_values[m].resize(xp_axis.count());
    for (std::size_t i = 0; i < x_axis.count(); ++i) {
      x_values[m][i] = members[m].evaluate(x_axis.at(i));
    }
    for (std::size_t j = 0; j < xp_axis.count(); ++j) {
      xp_values[m][j] = members[m].evaluate(xp_axis.at(j));
    }
  }

  const std::ptrdiff_t nx = static_cast<std::ptrdiff_t>(x_axis.count());
  const std::ptrdiff_t nxp = static_cast<std::ptrdiff_t>(xp_axis.count());
  std::vector<Complex> values(x_axis.count() * xp_axis.count());
#pragma omp parallel for if (parallel) schedule(static)
  for (std::ptrdiff_t i = 0; i < nx; ++i) {
    for (std::ptrdiff_t j = 0; j < nxp; ++j) {
      values[static_cast<std::size_t>(i * nxp + j)] =
          accumulate_cell(weights, x_values, xp_values, static_cast<std::size_t>(i),
                          static_cast<std::size_t>(j));
    }
  }
  return CoherenceField(x_axis, xp_axis, std::move(values));
}

CoherenceField sample_evaluator(const FieldEvaluator& evaluator, const Axis& x_axis,
                                const Axis& xp_axis, bool parallel) {
  if (!evaluator) {
    throw std::invalid_argument("coherence: evaluator must be callable");
  }
  const std::ptrdiff_t nx = static_cast<std::ptrdiff_t>(x_axis.count());
  const std::ptrdiff_t nxp = static_cast<std::ptrdiff_t>(xp_axis.count());
  std::vector<Complex> values(x_axis.count() * xp_axis.count());
#pragma omp parallel for if (parallel) schedule(static)
  for (std::ptrdiff_t i = 0; i < nx; ++i) {
    for (std::ptrdiff_t j = 0; j < nxp; ++j) {
      values[static_cast<std::size_t>(i * nxp + j)] =
          evaluator(x_axis.at(static_cast<std::size_t>(i)),
                    xp_axis.at(static_cast<std::size_t>(j)));
    }
  }
  return CoherenceField(x_axis, xp_axis, std::move(values));
}

}  // namespace

Axis::Axis(double min, double max, std::size_t count)
    : min_(min), max_(max), count_(count), spacing_(0.0) {
  if (!std::isfinite(min_) || !std::isfinite(max_)) {
    throw std::invalid_argument("coherence: axis bounds must be finite");
  }
  if (!(min_ < max_)) {
    throw std::invalid_argument("coherence: axis needs min < max");
  }
  if (count_ < 2) {
    throw std::invalid_argument("coherence: axis needs at least two points");
  }
  spacing_ = (max_ - min_) / static_cast<double>(count_ - 1);
}

Ensemble::Ensemble(std::vector<ScatteringState> members) : members_(std::move(members)) {
  if (members_.empty()) {
    throw std::invalid_argument("coherence: ensemble must have at least one member");
  }
  bool any_positive = false;
  for (const auto& member : members_) {
    if (member.energy() != members_.front().energy()) {
      throw std::invalid_argument("coherence: ensemble members must share one energy");
    }
    any_positive = any_positive || member.weight() > 0.0;
  }
  if (!any_positive) {
    throw std::invalid_argument("coherence: at least one member weight must be positive");
  }
}

Complex Ensemble::correlation(double x, double xp) const {
  Complex acc(0.0, 0.0);
  for (const auto& member : members_) {
    acc += member.weight() * (std::conj(member.evaluate(x)) * member.evaluate(xp));
  }
  return acc;
}

Ensemble two_member_mixture(const PotentialProfile& profile, double energy, double weight_free,
                            double weight_scattered) {
  std::vector<ScatteringState> members;
  members.reserve(2);
  members.push_back(solve(PotentialProfile::uniform(0.0), energy, weight_free));
  members.push_back(solve(profile, energy, weight_scattered));
  return Ensemble(std::move(members));
}

CoherenceField::CoherenceField(Axis x_axis, Axis xp_axis)
    : x_(x_axis),
      xp_(xp_axis),
      values_(x_axis.count() * xp_axis.count(), Complex(0.0, 0.0)),
      degenerate_(x_axis.count() * xp_axis.count(), 0) {}

CoherenceField::CoherenceField(Axis x_axis, Axis xp_axis, std::vector<Complex> values)
    : x_(x_axis),
      xp_(xp_axis),
      values_(std::move(values)),
      degenerate_(x_axis.count() * xp_axis.count(), 0) {
  if (values_.size() != x_.count() * xp_.count()) {
    throw std::invalid_argument("coherence: value count must match the grid");
  }
}

void CoherenceField::set(std::size_t i, std::size_t j, Complex value) {
  values_[i * xp_.count() + j] = value;
  max_abs_cache_ = -1.0;
}

void CoherenceField::set_degenerate(std::size_t i, std::size_t j) {
  degenerate_[i * xp_.count() + j] = 1;
}

double CoherenceField::max_abs() const {
  if (max_abs_cache_ >= 0.0) {
    return max_abs_cache_;
  }
  double best = 0.0;
  for (const Complex& v : values_) {
    const double a = std::abs(v);
    if (std::isfinite(a) && a > best) {
      best = a;
    }
  }
  max_abs_cache_ = best;
  return best;
}

CoherenceField sample_grid(const Ensemble& ensemble, const Axis& x_axis, const Axis& xp_axis) {
  return sample_members(ensemble, x_axis, xp_axis, true);
}

CoherenceField sample_grid_serial(const Ensemble& ensemble, const Axis& x_axis,
                                  const Axis& xp_axis) {
  return sample_members(ensemble, x_axis, xp_axis, false);
}

CoherenceField sample_grid(const FieldEvaluator& evaluator, const Axis& x_axis,
                           const Axis& xp_axis) {
  return sample_evaluator(evaluator, x_axis, xp_axis, true);
}

CoherenceField sample_grid_serial(const FieldEvaluator& evaluator, const Axis& x_axis,
                                  const Axis& xp_axis) {
  return sample_evaluator(evaluator, x_axis, xp_axis, false);
}

CoherenceField normalize(const Ensemble& ensemble, const CoherenceField& field,
                         double eps_intensity_rel) {
  if (!(eps_intensity_rel > 0.0) || !std::isfinite(eps_intensity_rel)) {
    throw std::invalid_argument("coherence: intensity threshold must be positive");
  }
  const Axis& ax = field.x_axis();
  const Axis& axp = field.xp_axis();
  std::vector<double> ix(ax.count()), ixp(axp.count());
  double peak = 0.0;
  for (std::size_t i = 0; i < ax.count(); ++i) {
    ix[i] = ensemble.intensity(ax.at(i));
    peak = std::max(peak, ix[i]);
  }
  for (std::size_t j = 0; j < axp.count(); ++j) {
    ixp[j] = ensemble.intensity(axp.at(j));
    peak = std::max(peak, ixp[j]);
  }
  const double floor = eps_intensity_rel * peak;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  CoherenceField out(ax, axp);
  for (std::size_t i = 0; i < ax.count(); ++i) {
    for (std::size_t j = 0; j < axp.count(); ++j) {
      if (ix[i] <= floor || ixp[j] <= floor) {
        out.set(i, j, Complex(nan, nan));
        out.set_degenerate(i, j);
        continue;
      }
      // Equal coordinates share one intensity value; dividing by it directly
      // keeps diagonal entries exactly 1 instead of sqrt(I)^2 rounding.
      const double denom =
          ax.at(i) == axp.at(j) ? ix[i] : std::sqrt(ix[i]) * std::sqrt(ixp[j]);
      out.set(i, j, field.at(i, j) / denom);
    }
  }
  out.set_normalized(true);
  return out;
}

Complex degree_of_coherence(const Ensemble& ensemble, double x, double xp) {
  const double ix = ensemble.intensity(x);
  const double ixp = ensemble.intensity(xp);
  if (!(ix > 0.0) || !(ixp > 0.0)) {
    std::ostringstream msg;
    msg << "coherence: intensity vanishes at x = " << (ix > 0.0 ? xp : x);
    throw std::domain_error(msg.str());
  }
  const double denom = x == xp ? ix : std::sqrt(ix) * std::sqrt(ixp);
  return ensemble.correlation(x, xp) / denom;
}

Complex analytic_step_G(double k, double q, double x, double xp) {
  if (!std::isfinite(k) || !std::isfinite(q) || !(k > 0.0) || q < 0.0) {
    throw std::invalid_argument("coherence: step correlation needs k > 0 and q >= 0");
  }
  if (!std::isfinite(x) || !std::isfinite(xp) || !(x < 0.0) || !(xp > 0.0)) {
    throw std::invalid_argument("coherence: step correlation is defined for x < 0 < x'");
  }
  const double t = 2.0 * k / (k + q);
  const double r = (k - q) / (k + q);
  return std::polar(1.0, -k * x + k * xp) + t * std::polar(1.0, -k * x + q * xp) +
         t * r * std::polar(1.0, k * x + q * xp);
}

}  // namespace cohvort
