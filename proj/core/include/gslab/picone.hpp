#ifndef GSLAB_PICONE_HPP
#define GSLAB_PICONE_HPP

#include <optional>
#include <span>

#include "gslab/domain.hpp"

namespace gslab::picone {

/// Pointwise data (u, u', v, v') at one radius: u >= 0 and v > 0, with the
/// radial reductions |grad u| = |u'| and grad u . grad v = u' v'.
struct PointState {
  double u;
  double du;
  double v;
  double dv;

  PointState(double u_, double du_, double v_, double dv_);
};

/// L(u,v) = |u'|^p + (p-1)(u/v)^p |v'|^p - p (u/v)^{p-1} u' |v'|^{p-2} v'.
/// Nonnegative up to rounding for every admissible state.
double lagrangian_L(const PointState& s, Exponent p);

/// L1 = |u'|^p + (p-1)(u/v)^p |v'|^p - p (u/v)^{p-1} |u'| |v'|^{p-1}  (>= 0
/// by t^p + (p-1) - pt >= 0).
double lagrangian_L1(const PointState& s, Exponent p);

/// L2 = p (u/v)^{p-1} |v'|^{p-2} (|u'||v'| - u'v') >= 0.  L1 + L2 = L.
double lagrangian_L2(const PointState& s, Exponent p);

/// R(u,v) via the expanded product rule
///   grad(u^p/v^{p-1}) = p(u/v)^{p-1} grad u - (p-1)(u/v)^p grad v;
/// equals lagrangian_L identically (generalized Picone identity).
double picone_R(const PointState& s, Exponent p);

/// f(t, theta) = |t^2 + 2 theta t + 1|^{p/2} - 1 - p theta t, strictly
/// positive for t > 0, theta in [-1, 1]. Evaluated through expm1/log1p so the
/// t -> 0 regime keeps full relative accuracy.
double scalar_f(double t, double theta, Exponent p);

/// scalar_f normalized by its two-sided comparison scale t^2 (1+t)^{p-2};
/// tends to 1 as t -> inf and to (p/2)(1 + (p-2) theta^2) as t -> 0+.
double ratio_g(double t, double theta, Exponent p);

/// Empirical two-sided constants of the vector inequality
///   |a+b|^p - |a|^p - p|a|^{p-2} a.b  ~  |b|^2 (|a|+|b|)^{p-2},
/// as the extrema of ratio_g over a (t, theta) grid.
struct EquivalenceConstants {
  double c_lower;
  double c_upper;
  double argmin_t, argmin_theta;
  double argmax_t, argmax_theta;
};

/// Sweep ratio_g over log-spaced t in [t_lo, t_hi] (>= 8 decades) and
/// theta_samples values of theta in [-1, 1], with local refinement around the
/// degeneracy t = -2 theta where f comes closest to zero.
EquivalenceConstants estimate_equivalence_constants(Exponent p, double t_lo = 1e-6,
                                                    double t_hi = 1e6,
                                                    int t_per_decade = 64,
                                                    int theta_samples = 201);

/// Ratio (|a+b|^p - |a|^p - p|a|^{p-2} a.b) / (|b|^2 (|a|+|b|)^{p-2}) for
/// vectors a != 0. b = 0 is a removable singularity: it throws unless
/// theta_limit supplies the direction cosine for the t -> 0 limit value.
double vector_inequality_check(std::span<const double> a, std::span<const double> b,
                               Exponent p,
                               std::optional<double> theta_limit = std::nullopt);

} // namespace gslab::picone

#endif
