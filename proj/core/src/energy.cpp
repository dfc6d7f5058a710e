#include "gslab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gslab/parallel.hpp"
#include "gslab/quad.hpp"
#include "gslab/solutions.hpp"

namespace gslab::energy {

namespace {

inline double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Integrands carry factors spanning hundreds of decades; every power is taken
// with its share of the r^{d-1} weight already attached so intermediates stay
// representable whenever the integrand itself is.
struct Weights {
  double p, d;
  double rw_p(double r) const { return std::pow(r, (d - 1.0) / p); }
  double rw_2(double r) const { return std::pow(r, (d - 1.0) / 2.0); }
};

quad::QuadOptions quad_options(const ScalarField& u, const RadialGrid& grid) {
  quad::QuadOptions qo;
  qo.breakpoints = grid.nodes();
  for (double x : u.knots()) qo.breakpoints.push_back(x);
  return qo;
}

} // namespace

void require_compact_support(const ScalarField& u, const ProblemSpec& spec,
                             const RadialGrid& grid) {
  // u must vanish at the outermost grid decade on each side; an inner leak is
  // tolerated only where the domain genuinely continues to a regular origin
  // with nothing left to integrate (flat u, vanishing potential mass).
  double umax = 0.0;
  for (double r : grid.nodes()) umax = std::max(umax, std::abs(u.value(r)));
  if (umax == 0.0) return;

  auto vanishes_at = [&](double r) { return std::abs(u.value(r)) <= 1e-12 * umax; };

  if (!vanishes_at(grid.hi()))
    throw std::invalid_argument("energy: support of '" + u.name() +
                                "' leaks past the outer grid end");
  if (!vanishes_at(grid.lo())) {
    const bool regular_origin = !spec.domain.punctured && spec.domain.r_min == 0.0;
    const double lo = grid.lo();
    const bool flat = u.derivative(lo) == 0.0 &&
                      u.derivative(0.5 * lo) == 0.0;
    const double pot_mass = std::abs(spec.potential.value(0.5 * lo)) *
                            std::pow(std::abs(u.value(lo)), spec.exponent.p()) *
                            std::pow(lo, spec.dimension.d());
    if (!(regular_origin && flat && pot_mass <= 1e-14))
      throw std::invalid_argument("energy: support of '" + u.name() +
                                  "' leaks past the inner grid end");
  }
}

RadialGrid support_grid(const CutoffFamily& family, int k, const ProblemSpec& spec,
                        int density) {
  const double hi = family.outer_zero(k) * 4.0;
  double lo;
  if (family.inner_ramp())
    lo = family.inner_zero(k) * 0.25;
  else
    lo = std::min(0.1 * family.window().first, family.plateau_hi(k) * 1e-8);
  lo = std::max(lo, spec.domain.r_min * (1.0 + 1e-12));
  return make_grid(spec.domain, density, lo, std::min(hi, spec.domain.r_max));
}

EnergyBreakdown energy_Q(const ScalarField& u, const ProblemSpec& spec,
                         const RadialGrid& grid) {
  require_compact_support(u, spec, grid);
  const Weights w{spec.exponent.p(), static_cast<double>(spec.dimension.d())};
  const double p = w.p;
  const auto& V = spec.potential;

  auto grad_part = [&](double r) {
    return std::pow(std::abs(u.derivative(r)) * w.rw_p(r), p);
  };
  // V |u|^p r^{d-1} grouped as (V r^s) (|u| r^{(d-1-s)/p})^p: the singular
  // factor joins the group so neither side overflows alone
  const double s = V.grouping_power();
  auto both = [&, s](double r) {
    const double rw = w.rw_p(r);
    const double qs = std::pow(std::abs(u.value(r)) * std::pow(r, (w.d - 1.0 - s) / p), p);
    const double pot = qs == 0.0 ? 0.0 : V.regular_value(r) * qs;
    return std::pow(std::abs(u.derivative(r)) * rw, p) + pot;
  };

  const auto qo = quad_options(u, grid);
  const auto total = quad::integrate(both, grid.lo(), grid.hi(), qo);
  const auto grad = quad::integrate(grad_part, grid.lo(), grid.hi(), qo);

  const double cd = sphere_constant(spec.dimension);
  EnergyBreakdown out;
  out.total = cd * total.value;
  out.gradient_term = cd * grad.value;
  out.potential_term = out.total - out.gradient_term;
  out.error_estimate = cd * (total.error_estimate + grad.error_estimate);
  return out;
}

double energy_Q_product(const ScalarField& v, const ScalarField& w,
                        const ProblemSpec& spec, const RadialGrid& grid) {
  require_compact_support(w, spec, grid);
  const Weights wt{spec.exponent.p(), static_cast<double>(spec.dimension.d())};
  const double p = wt.p;

  auto integrand = [&](double r) {
    const double rw = wt.rw_p(r);
    const double vv = v.value(r), dv = v.derivative(r);
    const double ww = w.value(r), dw = w.derivative(r);
    const double head = std::pow(std::abs(vv * dw + ww * dv) * rw, p);
    const double sub = std::pow(std::abs(ww * dv) * rw, p);
    // p w^{p-1} v |v'|^{p-2} v' w' r^{d-1}, grouped through (w |v'| rw)^{p-1}
    const double cross =
        p * std::pow(std::abs(ww * dv) * rw, p - 1.0) * sgn(dv) * vv * dw * rw;
    return head - sub - cross;
  };

  quad::QuadOptions qo = quad_options(w, grid);
  for (double x : v.knots()) qo.breakpoints.push_back(x);
  const auto res = quad::integrate(integrand, grid.lo(), grid.hi(), qo);
  return sphere_constant(spec.dimension) * res.value;
}

namespace {

// v^2 |w'|^2 (w|v'| + v|w'|)^{p-2} r^{d-1}, restricted to {v > 0} when asked.
double simplified_integral(const ScalarField& v, const ScalarField& w, double p, double d,
                           const RadialGrid& grid, bool restrict_positive) {
  const Weights wt{p, d};
  auto integrand = [&](double r) {
    const double dw = w.derivative(r);
    if (dw == 0.0) return 0.0;
    const double vv = v.value(r);
    if (restrict_positive && vv <= 0.0) return 0.0;
    const double base = w.value(r) * std::abs(v.derivative(r)) + vv * std::abs(dw);
    const double m = vv * std::abs(dw) * wt.rw_2(r);
    return m * m * std::pow(base, p - 2.0);
  };
  quad::QuadOptions qo;
  qo.breakpoints = grid.nodes();
  for (double x : w.knots()) qo.breakpoints.push_back(x);
  for (double x : v.knots()) qo.breakpoints.push_back(x);
  return quad::integrate(integrand, grid.lo(), grid.hi(), qo).value;
}

} // namespace

double simplified_energy(const ScalarField& v, const ScalarField& w, Exponent p,
                         Dimension d, const RadialGrid& grid) {
  return sphere_constant(d) *
         simplified_integral(v, w, p.p(), d.d(), grid, /*restrict_positive=*/false);
}

std::pair<double, double> simplified_energy_split(const ScalarField& v, const ScalarField& w,
                                                  Exponent pe, Dimension de,
                                                  const RadialGrid& grid) {
  if (!pe.super_quadratic())
    throw std::invalid_argument("simplified_energy_split: requires p > 2");
  const double p = pe.p(), d = de.d();
  const Weights wt{p, d};

  auto e1 = [&](double r) {
    return std::pow(v.value(r) * std::abs(w.derivative(r)) * wt.rw_p(r), p);
  };
  auto e2 = [&](double r) {
    const double dw = w.derivative(r);
    if (dw == 0.0) return 0.0;
    const double m = v.value(r) * std::abs(dw) * wt.rw_2(r);
    return m * m * std::pow(std::abs(v.derivative(r)), p - 2.0) *
           std::pow(w.value(r), p - 2.0);
  };

  quad::QuadOptions qo;
  qo.breakpoints = grid.nodes();
  for (double x : w.knots()) qo.breakpoints.push_back(x);
  const double cd = sphere_constant(de);
  return {cd * quad::integrate(e1, grid.lo(), grid.hi(), qo).value,
          cd * quad::integrate(e2, grid.lo(), grid.hi(), qo).value};
}

double simplified_energy_allp(const ScalarField& v, const ScalarField& w, Exponent pe,
                              Dimension de, const RadialGrid& grid) {
  if (pe.quadratic())
    throw std::invalid_argument("simplified_energy_allp: defined for p != 2");
  const double p = pe.p(), d = de.d();
  const Weights wt{p, d};
  const double q = 2.0 / (p - 2.0);

  auto integrand = [&](double r) {
    const double dw = w.derivative(r);
    if (dw == 0.0) return 0.0;
    const double vv = v.value(r);
    const double base = w.value(r) * std::abs(v.derivative(r)) * std::pow(vv, q) +
                        std::pow(vv, q + 1.0) * std::abs(dw);
    const double m = std::abs(dw) * wt.rw_2(r);
    return m * m * std::pow(base, p - 2.0);
  };
  quad::QuadOptions qo;
  qo.breakpoints = grid.nodes();
  for (double x : w.knots()) qo.breakpoints.push_back(x);
  return sphere_constant(de) * quad::integrate(integrand, grid.lo(), grid.hi(), qo).value;
}

double monotone_kernel(double s, double t, double alpha, double beta, Exponent pe) {
  if (!pe.super_quadratic())
    throw std::invalid_argument("monotone_kernel: requires p > 2");
  if (!(s >= 0.0) || !(t >= 0.0) || !(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("monotone_kernel: nonnegative s,t and positive alpha,beta");
  const double p = pe.p();
  return alpha * alpha * t * t *
         std::pow(beta * std::pow(s, 1.0 / (p - 2.0)) + alpha * t, p - 2.0);
}

EquivalenceReport equivalence_report(const ScalarField& v, const CutoffFamily& family,
                                     const ProblemSpec& spec, EquivalenceMode mode) {
  EquivalenceReport rep;
  rep.family = "log_cutoff K=" + std::to_string(family.size());
  rep.mode = mode;
  const int K = family.size();
  rep.q_direct.resize(K);
  rep.q_expanded.resize(K);
  rep.simplified.resize(K);
  rep.ratios.resize(K);

  const ScalarField base =
      mode == EquivalenceMode::one_sided ? solutions::positive_part(v) : v;

  parallel_for(static_cast<std::size_t>(K), [&](std::size_t i) {
    const int k = static_cast<int>(i) + 1;
    const auto w = family.member(k);
    const auto grid = support_grid(family, k, spec);
    const auto u = product(base, w);
    rep.q_direct[i] = energy_Q(u, spec, grid).total;
    if (mode == EquivalenceMode::two_sided)
      rep.q_expanded[i] = energy_Q_product(base, w, spec, grid);
    rep.simplified[i] =
        sphere_constant(spec.dimension) *
        simplified_integral(base, w, spec.exponent.p(), spec.dimension.d(), grid,
                            mode == EquivalenceMode::one_sided);
  });

  rep.inf_ratio = std::numeric_limits<double>::infinity();
  rep.sup_ratio = 0.0;
  for (int i = 0; i < K; ++i) {
    if (rep.simplified[i] == 0.0) {
      if (rep.q_direct[i] != 0.0) rep.violation = true;
      rep.ratios[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    rep.ratios[i] = rep.q_direct[i] / rep.simplified[i];
    rep.inf_ratio = std::min(rep.inf_ratio, rep.ratios[i]);
    rep.sup_ratio = std::max(rep.sup_ratio, rep.ratios[i]);
    if (mode == EquivalenceMode::two_sided) {
      const double scale = std::max({std::abs(rep.q_direct[i]), std::abs(rep.q_expanded[i]),
                                     1e-300});
      rep.max_route_disagreement =
          std::max(rep.max_route_disagreement,
                   std::abs(rep.q_direct[i] - rep.q_expanded[i]) / scale);
    }
  }
  return rep;
}

} // namespace gslab::energy
