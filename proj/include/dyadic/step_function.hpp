#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dyadic/tree.hpp"

namespace dyadic {

struct Piece {
  double length = 0.0;
  double value = 0.0;
  bool operator==(const Piece&) const = default;
};

/// Non-increasing step function on (0, T], T = sum of piece lengths.
///
/// Piece i occupies the half-open interval (start(i), end(i)]. Breakpoints and
/// cumulative integrals are stored next to the pieces, so point queries are a
/// binary search and partial integrals carry no accumulated drift.
class StepFunction {
 public:
  explicit StepFunction(std::vector<Piece> pieces);

  static StepFunction constant(double value, double length = 1.0);

  std::span<const Piece> pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }
  const Piece& piece(std::size_t i) const { return pieces_[i]; }

  double start(std::size_t i) const { return i == 0 ? 0.0 : ends_[i - 1]; }
  double end(std::size_t i) const { return ends_[i]; }
  /// Integral of g over (0, end(i)].
  double cumulative_integral(std::size_t i) const { return cumulative_[i]; }
  /// Integral of g over (0, start(i)].
  double integral_before(std::size_t i) const { return i == 0 ? 0.0 : cumulative_[i - 1]; }

  double total_length() const { return ends_.back(); }
  double integral() const { return cumulative_.back(); }
  double max_value() const { return pieces_.front().value; }
  double min_value() const { return pieces_.back().value; }
  bool is_normalized(double tol = 1e-9) const;

  /// Index of the piece containing t, for 0 < t <= total_length().
  std::size_t piece_index(double t) const;
  double value_at(double t) const { return pieces_[piece_index(t)].value; }
  /// Integral of g over (0, t].
  double integral_to(double t) const;

  /// The restriction of g to (lo, hi], as pieces of positive length.
  std::vector<Piece> slice(double lo, double hi) const;

  bool operator==(const StepFunction& other) const { return pieces_ == other.pieces_; }

 private:
  std::vector<Piece> pieces_;
  std::vector<double> ends_;
  std::vector<double> cumulative_;
};

/// Decreasing rearrangement of a simple function given by (measure, value)
/// pairs. Ties keep the input order.
StepFunction decreasing_rearrangement(std::span<const double> measures,
                                      std::span<const double> values);
StepFunction decreasing_rearrangement(const AtomFunction& phi);

/// (1/t) * integral of g over (0, t]; 0 < t <= total length.
double hardy_average(const StepFunction& g, double t);

/// Integral of g^q over (0, t]; closed form, q >= 1 (q = 0 also accepted).
double step_power_integral(const StepFunction& g, double q, double t);

/// Sentinel returned by beta_lambda when lambda exceeds the essential sup of g.
inline constexpr double kEmptyLevel = 0.0;

/// The largest t in (0, 1] at which the Hardy average of g equals lambda.
///
/// Requires lambda > integral of g (throws DomainError otherwise). When lambda
/// is above max g the level set is empty and kEmptyLevel is returned.
double beta_lambda(const StepFunction& g, double lambda);

/// Integral over (0, k] of the pointwise product of two step functions.
double pieced_product_integral(const StepFunction& a, const StepFunction& b, double k);

}  // namespace dyadic
