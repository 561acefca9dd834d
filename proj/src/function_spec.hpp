#pragma once
#include <vector>

namespace spduff {

enum class FunctionKind { polynomial, trig_sum, sum_of_both };

struct TrigTerm {
  double amplitude = 0;
  double freq = 0;   // angular frequency
  double phase = 0;
};

/// Scalar function with closed-form derivatives: a polynomial (ascending
/// powers) plus a sum of sine terms amplitude*sin(freq*x + phase).
/// Values, first and second derivatives and the antiderivative are exact;
/// nothing downstream ever differentiates numerically.
class FunctionSpec {
public:
  static FunctionSpec polynomial(std::vector<double> coeffs);
  static FunctionSpec trig_sum(std::vector<TrigTerm> terms);
  static FunctionSpec sum_of_both(std::vector<double> coeffs, std::vector<TrigTerm> terms);

  FunctionKind kind() const { return kind_; }
  const std::vector<double>& poly() const { return poly_; }
  const std::vector<TrigTerm>& trig() const { return trig_; }

  /// Value (order 0) or exact derivative (order 1, 2) at x.
  /// Throws EvaluationOverflow if the result is not finite.
  double eval(double x, int order = 0) const;

  /// Exact antiderivative normalized so that the integral from 0 vanishes.
  double integral_from_zero(double x) const;

  /// Certified upper bound on |f'| over [lo, hi] (coefficient sums).
  double derivative_bound(double lo, double hi) const;

  /// Flat wire encoding used by the JSON schema. polynomial: ascending
  /// coefficients; trig-sum: (amplitude, freq, phase) triples; sum-of-both:
  /// leading entry = polynomial coefficient count, then the polynomial
  /// coefficients, then the triples.
  std::vector<double> flat_coefficients() const;
  static FunctionSpec from_flat(FunctionKind kind, const std::vector<double>& coeffs);

private:
  FunctionSpec() = default;
  void check() const;  // non-empty, finite entries

  FunctionKind kind_ = FunctionKind::polynomial;
  std::vector<double> poly_;
  std::vector<TrigTerm> trig_;
};

}  // namespace spduff
