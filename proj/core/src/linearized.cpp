#include "gslab/linearized.hpp"

#include <cmath>
#include <stdexcept>

#include "gslab/energy.hpp"
#include "gslab/parallel.hpp"
#include "gslab/quad.hpp"
#include "gslab/solutions.hpp"

namespace gslab::linearized {

QuadraticFormSpec::QuadraticFormSpec(ScalarField phi, ProblemSpec origin)
    : phi_(std::move(phi)), origin_(std::move(origin)) {
  if (origin_.exponent.sub_quadratic()) {
    // |phi'|^{p-2} blows up where phi' = 0; scan a coarse grid and flag.
    const auto grid = make_grid(origin_.domain, 8,
                                std::max(1e-4, origin_.domain.r_min * 2.0 + 1e-4), 1e4);
    for (double r : grid.nodes())
      if (phi_.derivative(r) == 0.0) flagged_.push_back(r);
  }
}

double QuadraticFormSpec::weight_grad(double r) const {
  return std::pow(std::abs(phi_.derivative(r)), origin_.exponent.p() - 2.0);
}

double QuadraticFormSpec::weight_pot(double r) const {
  return origin_.potential.value(r) *
         std::pow(phi_.value(r), origin_.exponent.p() - 2.0);
}

double quadratic_form_a(const ScalarField& u, const QuadraticFormSpec& qspec,
                        const RadialGrid& grid) {
  energy::require_compact_support(u, qspec.origin(), grid);
  const double p = qspec.origin().exponent.p();
  const double d = qspec.origin().dimension.d();
  const auto& phi = qspec.phi();
  const auto& V = qspec.origin().potential;

  // V phi^{p-2} u^2 r^{d-1} grouped as (V r^s) phi^{p-2} (|u| r^{(d-1-s)/2})^2
  const double s = V.grouping_power();
  auto integrand = [&, s](double r) {
    const double du = std::abs(u.derivative(r));
    double grad = 0.0;
    if (du > 0.0) {
      // assembled in log scale: |phi'|^{p-2} alone can overflow while the
      // combined integrand stays representable
      double log_m = std::log(du) + 0.5 * (d - 1.0) * std::log(r);
      if (p != 2.0) log_m += 0.5 * (p - 2.0) * std::log(std::abs(phi.derivative(r)));
      grad = std::exp(2.0 * log_m);
    }
    const double q = std::abs(u.value(r)) * std::pow(r, 0.5 * (d - 1.0 - s));
    const double pot =
        q == 0.0 ? 0.0 : V.regular_value(r) * std::pow(phi.value(r), p - 2.0) * q * q;
    return grad + pot;
  };

  quad::QuadOptions qo;
  qo.breakpoints = grid.nodes();
  for (double x : u.knots()) qo.breakpoints.push_back(x);
  for (double x : phi.knots()) qo.breakpoints.push_back(x);
  const auto res = quad::integrate(integrand, grid.lo(), grid.hi(), qo);
  return sphere_constant(qspec.origin().dimension) * res.value;
}

LinearPiconeResult linear_picone_check(const ScalarField& psi, const ScalarField& v,
                                       const QuadraticFormSpec& qspec, PiconeMode mode,
                                       double tol) {
  LinearPiconeResult out;
  const double d = qspec.origin().dimension.d();
  const double cd = sphere_constant(qspec.origin().dimension);

  // Certify psi against the weighted weak form: for compact bumps b,
  //   integral (wg psi' b' + wp psi b) r^{d-1} dr  ~ 0   (<= 0 subsolution).
  if (v.knots().size() < 2)
    throw std::invalid_argument("linear_picone_check: v must have compact support knots");
  const double lo = v.knots().front(), hi = v.knots().back();
  double worst = 0.0;
  double scale_acc = 0.0;
  for (int i = 0; i < 8; ++i) {
    const double c = lo * std::pow(hi / lo, (i + 0.5) / 8.0);
    const double h = 0.3 * c;
    auto bump = solutions::make_bump(c, h);
    auto pairing = [&](double r) {
      const double rw = std::pow(r, d - 1.0);
      return (qspec.weight_grad(r) * psi.derivative(r) * bump.derivative(r) +
              qspec.weight_pot(r) * psi.value(r) * bump.value(r)) *
             rw;
    };
    auto scale_fn = [&](double r) {
      const double rw = std::pow(r, d - 1.0);
      return (std::abs(qspec.weight_grad(r) * psi.derivative(r) * bump.derivative(r)) +
              std::abs(qspec.weight_pot(r) * psi.value(r) * bump.value(r))) *
             rw;
    };
    quad::QuadOptions qo;
    qo.breakpoints = bump.knots();
    const double res = quad::integrate(pairing, c - h, c + h, qo).value;
    const double scl = quad::integrate(scale_fn, c - h, c + h, qo).value;
    scale_acc = std::max(scale_acc, scl);
    if (mode == PiconeMode::equality)
      worst = std::max(worst, std::abs(res) / std::max(scl, 1e-300));
    else
      worst = std::max(worst, res / std::max(scl, 1e-300));  // subsolution: res <= tol
  }
  out.certification_residual = worst;
  out.certified = worst <= tol;

  const auto grid = make_grid(qspec.origin().domain, 16, lo * 0.5,
                              std::min(hi * 2.0, qspec.origin().domain.r_max));
  out.lhs = quadratic_form_a(product(psi, v), qspec, grid);

  auto rhs_integrand = [&](double r) {
    const double rw = std::pow(r, 0.5 * (d - 1.0));
    const double wg_half = std::pow(std::abs(qspec.phi().derivative(r)),
                                    0.5 * (qspec.origin().exponent.p() - 2.0));
    const double m = std::abs(psi.value(r)) * std::abs(v.derivative(r)) * wg_half * rw;
    return m * m;
  };
  quad::QuadOptions qo;
  qo.breakpoints = v.knots();
  for (double x : psi.knots()) qo.breakpoints.push_back(x);
  out.rhs = cd * quad::integrate(rhs_integrand, lo, hi, qo).value;

  const double gap = std::abs(out.lhs - out.rhs);
  const double scale = std::max({std::abs(out.lhs), std::abs(out.rhs), 1e-300});
  if (mode == PiconeMode::equality)
    out.holds = gap / scale <= tol;
  else
    out.holds = out.lhs <= out.rhs + tol * scale;
  return out;
}

namespace {

double weighted_square_integral(const ScalarField& phi, const ScalarField& g, double p,
                                double d, const RadialGrid& grid, double extra_pow_w,
                                const ScalarField* w_for_extra) {
  // C_d integral phi^2 |phi'|^{p-2} |g'|^2 [w^{extra}] r^{d-1} dr. The factors
  // span hundreds of decades individually, so the product is assembled in log
  // scale; only the combined value must be representable.
  auto integrand = [&](double r) {
    const double dg = g.derivative(r);
    if (dg == 0.0) return 0.0;
    double log_term = 2.0 * std::log(phi.value(r)) + 2.0 * std::log(std::abs(dg)) +
                      (d - 1.0) * std::log(r);
    if (p != 2.0) log_term += (p - 2.0) * std::log(std::abs(phi.derivative(r)));
    if (w_for_extra && extra_pow_w != 0.0) {
      const double wv = w_for_extra->value(r);
      if (wv <= 0.0) return 0.0;
      log_term += extra_pow_w * std::log(wv);
    }
    return std::exp(log_term);
  };
  quad::QuadOptions qo;
  qo.breakpoints = grid.nodes();
  for (double x : g.knots()) qo.breakpoints.push_back(x);
  return quad::integrate(integrand, grid.lo(), grid.hi(), qo).value;
}

} // namespace

TransferSequence transfer_Q_to_a(const CutoffFamily& family, const ScalarField& phi,
                                 const ProblemSpec& spec,
                                 const nullseq::DecayConvention& convention) {
  const double p = spec.exponent.p();
  if (!(p > 2.0))
    throw std::invalid_argument("transfer_Q_to_a: requires p > 2 (use transfer_a_to_Q)");
  const double d = spec.dimension.d();
  const double cd = sphere_constant(spec.dimension);

  TransferSequence out;
  out.base = nullseq::verify_null_sequence(family, phi, spec, std::nullopt, convention);

  const int K = family.size();
  out.values.resize(K);
  out.aux.resize(K);
  out.normalization.resize(K);
  const auto B = family.window();

  parallel_for(static_cast<std::size_t>(K), [&](std::size_t i) {
    const int k = static_cast<int>(i) + 1;
    const auto w = family.member(k);
    const auto vk = power(w, 0.5 * p);
    const auto grid = energy::support_grid(family, k, spec);

    out.values[i] = cd * weighted_square_integral(phi, vk, p, d, grid, 0.0, nullptr);
    // chain identity route: (p/2)^2 integral phi^2 |phi'|^{p-2} w^{p-2} |w'|^2
    out.aux[i] = cd * 0.25 * p * p *
                 weighted_square_integral(phi, w, p, d, grid, p - 2.0, &w);

    auto norm_integrand = [&](double r) {
      const double x = phi.value(r) * vk.value(r) * std::pow(r, 0.5 * (d - 1.0));
      return x * x;
    };
    quad::QuadOptions qo;
    qo.breakpoints = vk.knots();
    out.normalization[i] =
        cd * quad::integrate(norm_integrand, B.first, B.second, qo).value;
  });

  for (int i = 0; i < K; ++i) {
    const double scale = std::max({out.values[i], out.aux[i], 1e-300});
    out.max_chain_residual =
        std::max(out.max_chain_residual, std::abs(out.values[i] - out.aux[i]) / scale);
  }
  out.judgement = nullseq::judge_sequence(out.values, out.normalization, convention);
  return out;
}

TransferSequence transfer_a_to_Q(const CutoffFamily& family, const ScalarField& phi,
                                 const ProblemSpec& spec,
                                 const nullseq::DecayConvention& convention) {
  const double p = spec.exponent.p();
  if (!(p < 2.0))
    throw std::invalid_argument("transfer_a_to_Q: requires p < 2 (use transfer_Q_to_a)");
  const double d = spec.dimension.d();
  const double cd = sphere_constant(spec.dimension);

  TransferSequence out;
  const int K = family.size();
  std::vector<double> a_vals(K), a_norm(K);
  out.values.resize(K);
  out.normalization.resize(K);
  const auto B = family.window();

  parallel_for(static_cast<std::size_t>(K), [&](std::size_t i) {
    const int k = static_cast<int>(i) + 1;
    const auto w = family.member(k);
    const auto grid = energy::support_grid(family, k, spec);

    // z_k = phi w_k as the candidate null family for the quadratic form:
    // a[phi w] = C_d integral phi^2 |phi'|^{p-2} |w'|^2 r^{d-1} dr.
    a_vals[i] = cd * weighted_square_integral(phi, w, p, d, grid, 0.0, nullptr);

    const auto wt = power(w, 2.0 / p);
    const auto u = product(phi, wt);
    out.values[i] = energy::energy_Q(u, spec, grid).total;

    auto norm2 = [&](double r) {
      const double x = phi.value(r) * w.value(r) * std::pow(r, 0.5 * (d - 1.0));
      return x * x;
    };
    auto normp = [&](double r) {
      return std::pow(std::abs(u.value(r)) * std::pow(r, (d - 1.0) / p), p);
    };
    quad::QuadOptions qo;
    qo.breakpoints = w.knots();
    a_norm[i] = cd * quad::integrate(norm2, B.first, B.second, qo).value;
    out.normalization[i] = cd * quad::integrate(normp, B.first, B.second, qo).value;
  });

  out.aux = a_vals;
  out.base = nullseq::judge_sequence(a_vals, a_norm, convention);
  out.judgement = nullseq::judge_sequence(out.values, out.normalization, convention);
  return out;
}

} // namespace gslab::linearized
