#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "cohvort/scattering.hpp"

namespace cohvort {

/// Uniform sampling axis over the closed interval [min, max], at least two points.
class Axis {
 public:
  Axis(double min, double max, std::size_t count);

  double min() const { return min_; }
  double max() const { return max_; }
  std::size_t count() const { return count_; }
  double spacing() const { return spacing_; }
  double at(std::size_t i) const { return min_ + spacing_ * static_cast<double>(i); }

  bool operator==(const Axis&) const = default;

 private:
  double min_;
  double max_;
  std::size_t count_;
  double spacing_;
};

/// Weighted statistical mixture of scattering states sharing one energy.
class Ensemble {
 public:
  explicit Ensemble(std::vector<ScatteringState> members);

  const std::vector<ScatteringState>& members() const { return members_; }
  double energy() const { return members_.front().energy(); }

  /// Unnormalized two-point correlation: sum_i w_i conj(psi_i(x)) psi_i(x').
  Complex correlation(double x, double xp) const;
  /// Ensemble-averaged intensity, the diagonal of the correlation.
  double intensity(double x) const { return correlation(x, x).real(); }

 private:
  std::vector<ScatteringState> members_;
};

/// The mixture of an undisturbed incident plane wave and the state scattered
/// off the given profile, both at the same energy.
Ensemble two_member_mixture(const PotentialProfile& profile, double energy,
                            double weight_free = 1.0, double weight_scattered = 1.0);

/// Complex correlation grid over a rectangular (x, x') window. Row-major in x
/// then x': cell (i, j) holds the value at (x_axis[i], xp_axis[j]). Cells of a
/// normalized field whose intensity denominator is degenerate hold NaN and are
/// flagged in the degeneracy mask.
class CoherenceField {
 public:
  CoherenceField(Axis x_axis, Axis xp_axis);
  CoherenceField(Axis x_axis, Axis xp_axis, std::vector<Complex> values);

  const Axis& x_axis() const { return x_; }
  const Axis& xp_axis() const { return xp_; }
  std::size_t x_count() const { return x_.count(); }
  std::size_t xp_count() const { return xp_.count(); }

  Complex at(std::size_t i, std::size_t j) const { return values_[i * xp_.count() + j]; }
  void set(std::size_t i, std::size_t j, Complex value);
  const std::vector<Complex>& values() const { return values_; }

  bool degenerate(std::size_t i, std::size_t j) const {
    return degenerate_[i * xp_.count() + j] != 0;
  }
  void set_degenerate(std::size_t i, std::size_t j);

  bool normalized() const { return normalized_; }
  void set_normalized(bool flag) { normalized_ = flag; }

  /// Largest finite |value| over the grid; 0 for an all-degenerate field.
  double max_abs() const;

 private:
  Axis x_;
  Axis xp_;
  std::vector<Complex> values_;
  std::vector<std::uint8_t> degenerate_;
  bool normalized_ = false;
  mutable double max_abs_cache_ = -1.0;
};

/// Pointwise field used for grid sampling and zero refinement.
using FieldEvaluator = std::function<Complex(double, double)>;

/// Samples the ensemble correlation over the grid. The computation is pure
/// per cell, so the parallel and serial variants agree bitwise.
CoherenceField sample_grid(const Ensemble& ensemble, const Axis& x_axis, const Axis& xp_axis);
CoherenceField sample_grid_serial(const Ensemble& ensemble, const Axis& x_axis,
                                  const Axis& xp_axis);
CoherenceField sample_grid(const FieldEvaluator& evaluator, const Axis& x_axis,
                           const Axis& xp_axis);
CoherenceField sample_grid_serial(const FieldEvaluator& evaluator, const Axis& x_axis,
                                  const Axis& xp_axis);

/// Divides each cell by sqrt(I(x) I(x')) to obtain the degree of coherence.
/// Cells where either intensity falls below eps_intensity_rel times the peak
/// intensity are flagged degenerate and set to NaN. Equal coordinates divide
/// by the intensity itself, making diagonal entries exactly 1.
CoherenceField normalize(const Ensemble& ensemble, const CoherenceField& field,
                         double eps_intensity_rel = 1e-14);

/// Degree of coherence at a single pair, same denominator convention as
/// normalize. Throws when either intensity vanishes.
Complex degree_of_coherence(const Ensemble& ensemble, double x, double xp);

/// Closed-form correlation of the two-member step mixture on the quadrant
/// x < 0 < x', for a step of height V = E - q^2 at the origin:
///   e^{i(-kx+kx')} + T e^{i(-kx+qx')} + T R e^{i(kx+qx')}.
Complex analytic_step_G(double k, double q, double x, double xp);

}  // namespace cohvort
