#include "gslab/solutions.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "gslab/quad.hpp"

namespace gslab::solutions {

namespace {

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
inline double signed_pow(double x, double q) { return sgn(x) * std::pow(std::abs(x), q); }

// log(base + e^x) without overflow for large |x|.
inline double log_base_plus_exp(double base, double x) {
  if (base == 0.0) return x;
  if (x > 36.0) return x + std::log1p(base * std::exp(-x));
  return std::log(base + std::exp(x));
}

} // namespace

double hardy_constant(Exponent pe, Dimension dim) {
  const double p = pe.p(), d = dim.d();
  if (p == d)
    throw std::invalid_argument("hardy_constant: degenerates to 0 at p = d");
  return std::pow(std::abs((p - d) / p), p);
}

const char* to_string(SolutionStatus s) {
  switch (s) {
    case SolutionStatus::solution: return "solution";
    case SolutionStatus::supersolution: return "supersolution";
    case SolutionStatus::subsolution: return "subsolution";
    case SolutionStatus::ground_state: return "ground_state";
  }
  return "?";
}

NamedFamily make_family(const std::string& name, Exponent pe, Dimension dim,
                        const std::map<std::string, double>& params) {
  const double p = pe.p();
  const double d = dim.d();
  const double m = pe.conjugate();  // p/(p-1)

  auto zero_fn = [](double) { return 0.0; };

  if (name == "constant") {
    LogForm lf;
    lf.at_infinity = {0.0, zero_fn};
    lf.at_zero = LogAsymptote{0.0, zero_fn};
    lf.dlog_dlogr = zero_fn;
    auto f = ScalarField::closed_form("constant", [](double) { return 1.0; },
                                      [](double) { return 0.0; }, true)
                 .with_second_derivative([](double) { return 0.0; })
                 .with_log_form(lf);
    return NamedFamily{name, pe, dim, RadialDomain::full_space(), f, Potential::zero(),
                       SolutionStatus::solution, params};
  }

  if (name == "hardy_phi") {
    if (p == d) throw std::invalid_argument("hardy_phi: requires p != d");
    const double e = (p - d) / p;
    LogForm lf;
    lf.at_infinity = {e, zero_fn};
    lf.at_zero = LogAsymptote{e, zero_fn};
    lf.dlog_dlogr = [e](double) { return e; };
    auto f = ScalarField::closed_form(
                 "hardy_phi", [e](double r) { return std::pow(r, e); },
                 [e](double r) { return e * std::pow(r, e - 1.0); }, true)
                 .with_second_derivative(
                     [e](double r) { return e * (e - 1.0) * std::pow(r, e - 2.0); })
                 .with_log_form(lf);
    const double cst = hardy_constant(pe, dim);
    Potential V("hardy", [cst, p](double r) { return -cst * std::pow(r, -p); }, p,
                [cst](double) { return -cst; });
    return NamedFamily{name,       pe,
                       dim,        RadialDomain::punctured_ray(),
                       f,          std::move(V),
                       SolutionStatus::solution, params};
  }

  if (name == "mp_supersol") {
    if (!(d > p)) throw std::invalid_argument("mp_supersol: requires d > p");
    const double e = (p - d) / p;
    auto val = [e, m](double r) { return std::pow(1.0 + std::pow(r, m), e); };
    auto der = [e, m](double r) {
      return e * m * std::pow(r, m - 1.0) * std::pow(1.0 + std::pow(r, m), e - 1.0);
    };
    auto d2 = [e, m](double r) {
      const double A = 1.0 + std::pow(r, m);
      return e * m *
             ((m - 1.0) * std::pow(r, m - 2.0) * std::pow(A, e - 1.0) +
              (e - 1.0) * m * std::pow(r, 2.0 * m - 2.0) * std::pow(A, e - 2.0));
    };
    LogForm lf;
    // log v = e log(1 + r^m): slope e m at infinity, flat (log v -> 0) at 0
    lf.at_infinity = {e * m, [e, m](double t) { return e * std::log1p(std::exp(-m * t)); }};
    lf.at_zero = LogAsymptote{0.0, [e, m](double t) {
                                return e * std::log1p(std::exp(m * t));
                              }};
    lf.dlog_dlogr = [e, m](double t) { return e * m / (1.0 + std::exp(-m * t)); };
    auto f = ScalarField::closed_form("mp_supersol", val, der, true)
                 .with_second_derivative(d2)
                 .with_log_form(lf);
    return NamedFamily{name, pe, dim, RadialDomain::full_space(), f, Potential::zero(),
                       SolutionStatus::supersolution, params};
  }

  if (name == "psi_alpha") {
    auto it = params.find("alpha");
    const double alpha = it == params.end() ? 0.0 : it->second;
    if (alpha < 0.0) throw std::invalid_argument("psi_alpha: alpha must be >= 0");
    if (!(d >= 2) || !(p < d)) throw std::invalid_argument("psi_alpha: requires d >= 2, 1 < p < d");
    const double q = (d - p) * (p - 1.0) / (p * p);
    auto val = [alpha, q, m](double r) { return std::pow(alpha + std::pow(r, m), -q); };
    auto der = [alpha, q, m](double r) {
      return -q * m * std::pow(r, m - 1.0) * std::pow(alpha + std::pow(r, m), -q - 1.0);
    };
    auto d2 = [alpha, q, m](double r) {
      const double A = alpha + std::pow(r, m);
      return q * m * std::pow(r, m - 2.0) * std::pow(A, -q - 2.0) *
             ((q + 1.0) * m * std::pow(r, m) - (m - 1.0) * A);
    };
    LogForm lf;
    // log v = -q log(alpha + r^m)
    lf.at_infinity = {-q * m, [alpha, q, m](double t) {
                        return -q * std::log1p(alpha * std::exp(-m * t));
                      }};
    if (alpha > 0.0)
      lf.at_zero = LogAsymptote{0.0, [alpha, q, m](double t) {
                                  return -q * log_base_plus_exp(alpha, m * t);
                                }};
    else
      lf.at_zero = LogAsymptote{-q * m, zero_fn};
    lf.dlog_dlogr = [alpha, q, m](double t) {
      return -q * m / (1.0 + alpha * std::exp(-m * t));
    };
    auto f = ScalarField::closed_form("psi_alpha", val, der, true)
                 .with_second_derivative(d2)
                 .with_log_form(lf);
    const double coeff = std::pow((d - p) / p, p);
    const double shift = alpha * d * p / (d - p);
    auto w_alpha_value = [coeff, shift, alpha, m, p](double r) {
      const double rm = std::pow(r, m);
      return -coeff * (shift + rm) / std::pow(alpha + rm, p);
    };
    // V decays like r^{-p}; group that power and keep V r^p in log scale so
    // the naive quotient's overflow/underflow range is never entered
    auto w_alpha_regular = [coeff, shift, alpha, m, p](double r) {
      const double t = std::log(r);
      const double log_num = log_base_plus_exp(shift, m * t);
      const double log_den = log_base_plus_exp(alpha, m * t);
      return -coeff * std::exp(log_num - p * log_den + p * t);
    };
    Potential V("w_alpha", w_alpha_value, alpha == 0.0 ? p : 0.0, w_alpha_regular, p);
    return NamedFamily{name,       pe,
                       dim,        RadialDomain::punctured_ray(),
                       f,          std::move(V),
                       SolutionStatus::solution, {{"alpha", alpha}}};
  }

  throw std::invalid_argument("make_family: unknown family '" + name + "'");
}

double radial_residual_strong(const ScalarField& v, const ProblemSpec& spec, double r) {
  if (!spec.domain.contains(r))
    throw std::invalid_argument("radial_residual_strong: r outside domain");
  const double p = spec.exponent.p();
  const double d = spec.dimension.d();

  const double dv = v.derivative(r);
  double d2v;
  if (auto exact = v.second_derivative(r)) {
    d2v = *exact;
  } else {
    const double h = std::max(r * 1e-5, 1e-12);
    d2v = (v.derivative(r + h) - v.derivative(r - h)) / (2.0 * h);
  }

  const double bracket = (p - 1.0) * d2v + (d - 1.0) / r * dv;
  double principal;
  if (bracket == 0.0)
    principal = 0.0;  // avoid 0 * inf when the operator degenerates
  else
    principal = -std::pow(std::abs(dv), p - 2.0) * bracket;
  return principal + spec.potential.value(r) * signed_pow(v.value(r), p - 1.0);
}

double strong_residual_scale(const ScalarField& v, const ProblemSpec& spec, double r) {
  const double p = spec.exponent.p();
  const double d = spec.dimension.d();
  const double dv = v.derivative(r);
  double d2v;
  if (auto exact = v.second_derivative(r)) {
    d2v = *exact;
  } else {
    const double h = std::max(r * 1e-5, 1e-12);
    d2v = (v.derivative(r + h) - v.derivative(r - h)) / (2.0 * h);
  }
  const double mag = (p - 1.0) * std::abs(d2v) + (d - 1.0) / r * std::abs(dv);
  double principal = mag == 0.0 ? 0.0 : std::pow(std::abs(dv), p - 2.0) * mag;
  return principal + std::abs(spec.potential.value(r)) * std::pow(std::abs(v.value(r)), p - 1.0);
}

namespace {

double weak_pairing(const ScalarField& v, const ProblemSpec& spec, const ScalarField& bump,
                    bool absolute) {
  const double p = spec.exponent.p();
  const double d = spec.dimension.d();
  if (bump.knots().size() < 2)
    throw std::invalid_argument("weak_residual: bump must have compact support knots");
  const double lo = bump.knots().front();
  const double hi = bump.knots().back();
  if (!(lo > spec.domain.r_min) || !(hi < spec.domain.r_max))
    throw std::invalid_argument("weak_residual: bump support outside domain");

  auto integrand = [&](double r) {
    const double rw = std::pow(r, d - 1.0);
    const double grad = signed_pow(v.derivative(r), p - 1.0) * bump.derivative(r) * rw;
    const double pot =
        spec.potential.value(r) * signed_pow(v.value(r), p - 1.0) * bump.value(r) * rw;
    return absolute ? std::abs(grad) + std::abs(pot) : grad + pot;
  };

  quad::QuadOptions qo;
  qo.breakpoints = bump.knots();
  for (double x : v.knots()) qo.breakpoints.push_back(x);
  auto res = quad::integrate(integrand, lo, hi, qo);
  return sphere_constant(spec.dimension) * res.value;
}

} // namespace

double weak_residual(const ScalarField& v, const ProblemSpec& spec, const ScalarField& bump) {
  return weak_pairing(v, spec, bump, false);
}

double weak_residual_scale(const ScalarField& v, const ProblemSpec& spec,
                           const ScalarField& bump) {
  return weak_pairing(v, spec, bump, true);
}

ScalarField make_bump(double center, double halfwidth) {
  if (!(halfwidth > 0.0)) throw std::invalid_argument("make_bump: halfwidth must be > 0");
  const double c = center, h = halfwidth;
  auto val = [c, h](double r) {
    const double x = (r - c) / h;
    if (std::abs(x) >= 1.0) return 0.0;
    const double y = 1.0 - x * x;
    return y * y * y;
  };
  auto der = [c, h](double r) {
    const double x = (r - c) / h;
    if (std::abs(x) >= 1.0) return 0.0;
    const double y = 1.0 - x * x;
    return -6.0 * x * y * y / h;
  };
  auto d2 = [c, h](double r) {
    const double x = (r - c) / h;
    if (std::abs(x) >= 1.0) return 0.0;
    const double y = 1.0 - x * x;
    return (-6.0 * y * y + 24.0 * x * x * y) / (h * h);
  };
  return ScalarField::closed_form("bump", val, der)
      .with_second_derivative(d2)
      .with_knots({c - h, c + h});
}

ScalarField positive_part(const ScalarField& v) {
  auto val = [v](double r) { return std::max(v.value(r), 0.0); };
  auto der = [v](double r) { return v.value(r) >= 0.0 ? v.derivative(r) : 0.0; };
  return ScalarField::closed_form("pos(" + v.name() + ")", val, der).with_knots(v.knots());
}

ResidualReport certify(const ScalarField& v, const ProblemSpec& spec, ResidualMode mode,
                       const CertifyOptions& opts) {
  if (opts.points < 2) throw std::invalid_argument("certify: need >= 2 points");
  ResidualReport rep;
  rep.mode = mode;
  rep.tolerance = opts.tolerance;

  const double llo = std::log(opts.lo), lhi = std::log(opts.hi);
  if (mode == ResidualMode::strong) {
    for (int i = 0; i < opts.points; ++i) {
      const double r = std::exp(llo + (lhi - llo) * i / (opts.points - 1));
      const double res = radial_residual_strong(v, spec, r);
      const double scale = strong_residual_scale(v, spec, r);
      rep.location.push_back(r);
      rep.residual.push_back(res);
      rep.relative.push_back(res / std::max(scale, 1e-300));
    }
  } else {
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < opts.points; ++i) {
      const double c = std::exp(llo + (lhi - llo) * uni(rng));
      const double h = c * (0.2 + 0.3 * uni(rng));  // support stays positive
      auto bump = make_bump(c, h);
      const double res = weak_residual(v, spec, bump);
      const double scale = weak_residual_scale(v, spec, bump);
      rep.location.push_back(c);
      rep.residual.push_back(res);
      rep.relative.push_back(res / std::max(scale, 1e-300));
    }
  }

  rep.min_relative = rep.relative.front();
  rep.max_relative = rep.relative.front();
  for (double x : rep.relative) {
    rep.min_relative = std::min(rep.min_relative, x);
    rep.max_relative = std::max(rep.max_relative, x);
    rep.max_abs_relative = std::max(rep.max_abs_relative, std::abs(x));
  }

  if (rep.max_abs_relative <= opts.tolerance)
    rep.verdict = SolutionStatus::solution;
  else if (rep.min_relative >= -opts.tolerance)
    rep.verdict = SolutionStatus::supersolution;
  else if (rep.max_relative <= opts.tolerance)
    rep.verdict = SolutionStatus::subsolution;

  return rep;
}

bool verdict_matches(const ResidualReport& report, SolutionStatus claimed) {
  if (!report.verdict) return false;
  switch (claimed) {
    case SolutionStatus::solution:
    case SolutionStatus::ground_state:
      return *report.verdict == SolutionStatus::solution;
    case SolutionStatus::supersolution:
      return *report.verdict == SolutionStatus::solution ||
             *report.verdict == SolutionStatus::supersolution;
    case SolutionStatus::subsolution:
      return *report.verdict == SolutionStatus::solution ||
             *report.verdict == SolutionStatus::subsolution;
  }
  return false;
}

} // namespace gslab::solutions
