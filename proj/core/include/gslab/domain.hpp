#ifndef GSLAB_DOMAIN_HPP
#define GSLAB_DOMAIN_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gslab {

/// Growth exponent p of the gradient term. Construction enforces p > 1.
class Exponent {
 public:
  explicit Exponent(double p);

  double p() const { return p_; }
  bool super_quadratic() const { return p_ > 2.0; }
  bool sub_quadratic() const { return p_ < 2.0; }
  bool quadratic() const { return p_ == 2.0; }
  /// Hoelder conjugate p/(p-1).
  double conjugate() const { return p_ / (p_ - 1.0); }

 private:
  double p_;
};

/// Ambient space dimension d >= 1.
class Dimension {
 public:
  explicit Dimension(int d);
  int d() const { return d_; }

 private:
  int d_;
};

/// Surface measure of the unit (d-1)-sphere, C_d = d pi^{d/2} / Gamma(d/2+1).
/// Reduces volume integrals of radial functions to C_d * integral f(r) r^{d-1} dr.
double sphere_constant(Dimension d);

/// Radial domain {r_min < |x| < r_max}. `punctured` marks r_min = 0 as an
/// excluded singular point (e.g. the punctured space), so integrands may
/// blow up as r -> r_min+.
struct RadialDomain {
  double r_min = 0.0;
  double r_max = std::numeric_limits<double>::infinity();
  bool punctured = false;

  RadialDomain() = default;
  RadialDomain(double lo, double hi, bool punct);

  bool unbounded() const { return !std::isfinite(r_max); }
  bool contains(double r) const { return r > r_min && r < r_max; }

  /// (0, inf) with the origin removed.
  static RadialDomain punctured_ray();
  /// [0, inf), origin regular.
  static RadialDomain full_space();
  /// (r0, inf), finite regular inner edge.
  static RadialDomain exterior(double r0);
};

/// Strictly increasing node set on a compact subinterval of the domain,
/// log-graded when the domain is punctured or unbounded.
class RadialGrid {
 public:
  RadialGrid(std::vector<double> nodes, int density, bool log_spaced);

  const std::vector<double>& nodes() const { return nodes_; }
  double lo() const { return nodes_.front(); }
  double hi() const { return nodes_.back(); }
  int density() const { return density_; }
  bool log_spaced() const { return log_spaced_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  std::vector<double> nodes_;
  int density_;
  bool log_spaced_;
};

/// Graded grid with `density` nodes per decade covering [lo, hi].
/// Throws if [lo, hi] is empty or leaves the domain, or density < 2.
RadialGrid make_grid(const RadialDomain& domain, int density, double lo, double hi);

/// One tail of a field in log scale: log v(e^t) = slope * t + correction(t)
/// with a subpolynomially growing correction. Keeping the linear part as an
/// explicit coefficient lets tail classifiers cancel it analytically instead
/// of numerically (the difference of two ~1e18 terms carries no information).
struct LogAsymptote {
  double slope = 0.0;
  std::function<double(double)> correction;  // of t = log r
};

/// Optional log-scale view of a positive field, evaluable far beyond the
/// range where r itself is representable.
struct LogForm {
  LogAsymptote at_infinity;                 // valid along t -> +inf
  std::optional<LogAsymptote> at_zero;      // valid along t -> -inf (punctured tails)
  std::function<double(double)> dlog_dlogr; // d log v / d log r at e^t
};

/// A radial scalar function with an evaluable value and derivative.
///
/// Closed-form backing wraps explicit callables (optionally with a second
/// derivative and a log-scale form). Sampled backing interpolates tabulated
/// values with a monotone cubic and keeps the tabulated derivatives as the
/// primary derivative source; differentiating the interpolant is only the
/// fallback when no derivative samples were given.
class ScalarField {
 public:
  static ScalarField closed_form(std::string name,
                                 std::function<double(double)> value,
                                 std::function<double(double)> derivative,
                                 bool positive = false);
  static ScalarField sampled(std::string name,
                             std::vector<double> r,
                             std::vector<double> v,
                             std::vector<double> dv = {},
                             bool positive = false);

  double value(double r) const;
  double derivative(double r) const;
  /// Exact second derivative when the backing provides one.
  std::optional<double> second_derivative(double r) const;

  bool positive() const { return positive_; }
  const std::string& name() const { return name_; }

  bool has_log_form() const;
  double log_value_at(double log_r) const;
  double dlog_dlogr_at(double log_r) const;
  const LogAsymptote& log_tail_infinity() const;
  bool has_log_tail_zero() const;
  const LogAsymptote& log_tail_zero() const;

  /// Radii where the derivative may jump (piecewise definitions); quadrature
  /// panels must break here.
  const std::vector<double>& knots() const { return knots_; }

  ScalarField with_second_derivative(std::function<double(double)> d2) const;
  ScalarField with_log_form(LogForm lf) const;
  ScalarField with_knots(std::vector<double> knots) const;

  friend ScalarField product(const ScalarField& a, const ScalarField& b);
  friend ScalarField quotient(const ScalarField& num, const ScalarField& den);
  /// f^q for a nonnegative field f. Requires q >= 1 so the derivative stays
  /// bounded at zeros of f.
  friend ScalarField power(const ScalarField& f, double q);

 private:
  struct Impl;
  explicit ScalarField(std::shared_ptr<const Impl> impl);

  std::shared_ptr<const Impl> impl_;
  std::string name_;
  bool positive_ = false;
  std::vector<double> knots_;
};

ScalarField product(const ScalarField& a, const ScalarField& b);
ScalarField quotient(const ScalarField& num, const ScalarField& den);
ScalarField power(const ScalarField& f, double q);

/// Potential term V of the functional. `singular_power` s > 0 declares a
/// power singularity V ~ r^{-s} at the origin; 0 means locally bounded.
///
/// Quadrature folds r^{-s} into its grouped weights, so singular potentials
/// should supply the bounded regular part V(r) r^s; V itself may overflow
/// deep inside a punctured domain while the integrand stays representable.
class Potential {
 public:
  /// `grouping_power` g is the power folded into quadrature groups: the
  /// regular part V(r) r^g must stay representable over the whole domain
  /// (also at huge r, where a decaying V itself underflows). Defaults to
  /// singular_power.
  Potential(std::string name, std::function<double(double)> value,
            double singular_power = 0.0,
            std::function<double(double)> regular_part = {},
            std::optional<double> grouping_power = std::nullopt);

  double value(double r) const { return value_(r); }
  /// V(r) * r^{grouping_power}; identical to value() for regular potentials.
  double regular_value(double r) const;
  double singular_power() const { return singular_power_; }
  double grouping_power() const { return grouping_power_; }
  const std::string& name() const { return name_; }

  static Potential zero();

 private:
  std::string name_;
  std::function<double(double)> value_;
  std::function<double(double)> regular_;
  double singular_power_;
  double grouping_power_;
};

/// The data of the functional Q(u) = integral |grad u|^p + V |u|^p.
struct ProblemSpec {
  Exponent exponent;
  Dimension dimension;
  RadialDomain domain;
  Potential potential;

  ProblemSpec(Exponent p, Dimension d, RadialDomain dom, Potential V);
};

} // namespace gslab

#endif
