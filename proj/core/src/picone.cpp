#include "gslab/picone.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gslab::picone {

namespace {

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// |x|^{p-2} x as sgn(x)|x|^{p-1}: finite for all p > 1 including x = 0.
inline double signed_pow(double x, double pm1) {
  return sgn(x) * std::pow(std::abs(x), pm1);
}

} // namespace

PointState::PointState(double u_, double du_, double v_, double dv_)
    : u(u_), du(du_), v(v_), dv(dv_) {
  if (!(v > 0.0)) throw std::invalid_argument("PointState: v must be > 0");
  if (!(u >= 0.0)) throw std::invalid_argument("PointState: u must be >= 0");
}

double lagrangian_L(const PointState& s, Exponent pe) {
  const double p = pe.p();
  const double t = s.u / s.v;
  return std::pow(std::abs(s.du), p) + (p - 1.0) * std::pow(t, p) * std::pow(std::abs(s.dv), p) -
         p * std::pow(t, p - 1.0) * s.du * signed_pow(s.dv, p - 1.0);
}

double lagrangian_L1(const PointState& s, Exponent pe) {
  const double p = pe.p();
  const double t = s.u / s.v;
  return std::pow(std::abs(s.du), p) + (p - 1.0) * std::pow(t, p) * std::pow(std::abs(s.dv), p) -
         p * std::pow(t, p - 1.0) * std::abs(s.du) * std::pow(std::abs(s.dv), p - 1.0);
}

double lagrangian_L2(const PointState& s, Exponent pe) {
  const double p = pe.p();
  const double t = s.u / s.v;
  // p t^{p-1} |v'|^{p-2} (|u'||v'| - u'v') with |v'|^{p-2} folded inside the
  // bracket, so a vanishing v' stays finite for p < 2.
  return p * std::pow(t, p - 1.0) *
         (std::abs(s.du) * std::pow(std::abs(s.dv), p - 1.0) -
          s.du * signed_pow(s.dv, p - 1.0));
}

double picone_R(const PointState& s, Exponent pe) {
  const double p = pe.p();
  const double t = s.u / s.v;
  // grad(u^p / v^{p-1}) expanded, then paired with |v'|^{p-2} v'.
  const double grad_ratio = p * std::pow(t, p - 1.0) * s.du - (p - 1.0) * std::pow(t, p) * s.dv;
  return std::pow(std::abs(s.du), p) - grad_ratio * signed_pow(s.dv, p - 1.0);
}

double scalar_f(double t, double theta, Exponent pe) {
  if (!(t > 0.0)) throw std::invalid_argument("scalar_f: t must be > 0");
  const double p = pe.p();
  const double x = t * t + 2.0 * theta * t;  // t^2 + 2 theta t + 1 = 1 + x, x >= -1
  if (std::abs(x) < 0.5) {
    // |1+x|^{p/2} - 1 = expm1((p/2) log1p(x)): no cancellation at small t
    return std::expm1(0.5 * p * std::log1p(x)) - p * theta * t;
  }
  return std::pow(std::abs(1.0 + x), 0.5 * p) - 1.0 - p * theta * t;
}

double ratio_g(double t, double theta, Exponent pe) {
  if (!(t > 0.0)) throw std::invalid_argument("ratio_g: t must be > 0");
  return scalar_f(t, theta, pe) / (t * t * std::pow(1.0 + t, pe.p() - 2.0));
}

EquivalenceConstants estimate_equivalence_constants(Exponent p, double t_lo, double t_hi,
                                                    int t_per_decade, int theta_samples) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo))
    throw std::invalid_argument("estimate_equivalence_constants: bad t range");
  if (std::log10(t_hi / t_lo) < 8.0)
    throw std::invalid_argument("estimate_equivalence_constants: t range must span >= 8 decades");
  if (theta_samples < 3 || t_per_decade < 4)
    throw std::invalid_argument("estimate_equivalence_constants: grid too coarse");

  EquivalenceConstants out;
  out.c_lower = std::numeric_limits<double>::infinity();
  out.c_upper = 0.0;

  const int nt = static_cast<int>(std::ceil(std::log10(t_hi / t_lo) * t_per_decade)) + 1;
  const double lstep = (std::log(t_hi) - std::log(t_lo)) / (nt - 1);

  auto consider = [&](double t, double theta) {
    const double g = ratio_g(t, theta, p);
    if (g < out.c_lower) {
      out.c_lower = g;
      out.argmin_t = t;
      out.argmin_theta = theta;
    }
    if (g > out.c_upper) {
      out.c_upper = g;
      out.argmax_t = t;
      out.argmax_theta = theta;
    }
  };

  for (int j = 0; j < theta_samples; ++j) {
    const double theta = -1.0 + 2.0 * j / (theta_samples - 1);
    for (int i = 0; i < nt; ++i) consider(std::exp(std::log(t_lo) + i * lstep), theta);
    // The closest approach of f to zero sits at s = 1, i.e. t = -2 theta
    // (theta < 0); refine locally since it can carry the global minimum.
    if (theta < 0.0) {
      const double tc = -2.0 * theta;
      for (int i = -40; i <= 40; ++i) {
        const double t = tc * std::pow(2.0, i / 16.0);
        if (t >= t_lo && t <= t_hi) consider(t, theta);
      }
    }
  }
  return out;
}

double vector_inequality_check(std::span<const double> a, std::span<const double> b,
                               Exponent pe, std::optional<double> theta_limit) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("vector_inequality_check: dimension mismatch");
  const double p = pe.p();

  double na2 = 0.0, nb2 = 0.0, dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    na2 += a[i] * a[i];
    nb2 += b[i] * b[i];
    dot += a[i] * b[i];
  }
  if (na2 == 0.0) throw std::invalid_argument("vector_inequality_check: a must be nonzero");

  const double na = std::sqrt(na2);
  if (nb2 == 0.0) {
    if (!theta_limit)
      throw std::domain_error(
          "vector_inequality_check: b = 0 is a removable singularity; pass theta_limit "
          "to request the t -> 0 limit value");
    const double th = *theta_limit;
    return 0.5 * p * (1.0 + (p - 2.0) * th * th);
  }

  // Normalize by |a|: both sides are degree-p homogeneous in (a, b).
  const double t = std::sqrt(nb2) / na;
  const double d = dot / na2;  // = theta * t
  const double x = 2.0 * d + t * t;
  double num;
  if (std::abs(x) < 0.25)
    num = std::expm1(0.5 * p * std::log1p(x)) - p * d;
  else
    num = std::pow(std::abs(1.0 + x), 0.5 * p) - 1.0 - p * d;
  const double den = t * t * std::pow(1.0 + t, p - 2.0);
  return num / den;
}

} // namespace gslab::picone
