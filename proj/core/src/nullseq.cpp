#include "gslab/nullseq.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gslab/energy.hpp"
#include "gslab/parallel.hpp"
#include "gslab/solutions.hpp"

namespace gslab::nullseq {

namespace {
constexpr double kEulerEE = 15.154262241479262;  // e^e, lower edge for eta_phi
}

ScalarField make_eta_phi(double gamma, Exponent pe, Dimension de) {
  const double p = pe.p(), d = de.d();
  if (!(p > 2.0) || !(p < d))
    throw std::invalid_argument("make_eta_phi: requires 2 < p < d");
  if (!(gamma > 0.0)) throw std::invalid_argument("make_eta_phi: gamma must be > 0");

  // log phi(t) = (1 - d/p) t + ((p-1)/p) log t + (gamma (p-2)/p) log log t
  const double c0 = 1.0 - d / p;
  const double c1 = (p - 1.0) / p;
  const double c2 = gamma * (p - 2.0) / p;

  auto corr = [c1, c2](double t) {
    return c1 * std::log(t) + c2 * std::log(std::log(t));
  };
  auto dlog = [c0, c1, c2](double t) { return c0 + c1 / t + c2 / (t * std::log(t)); };

  auto val = [c0, corr](double r) {
    if (!(r > kEulerEE))
      throw std::domain_error("eta_phi: defined for r > e^e only");
    const double t = std::log(r);
    return std::exp(c0 * t + corr(t));
  };
  auto der = [c0, corr, dlog](double r) {
    if (!(r > kEulerEE))
      throw std::domain_error("eta_phi: defined for r > e^e only");
    const double t = std::log(r);
    return std::exp(c0 * t + corr(t)) * dlog(t) / r;
  };

  LogForm lf;
  lf.at_infinity = {c0, corr};
  lf.dlog_dlogr = dlog;
  return ScalarField::closed_form("eta_phi", val, der, true).with_log_form(lf);
}

// --- sequence judgement -----------------------------------------------------

SequenceReport judge_sequence(std::vector<double> values, std::vector<double> normalization,
                              const DecayConvention& convention) {
  const std::size_t K = values.size();
  if (K < 3) throw std::invalid_argument("judge_sequence: need >= 3 values");

  SequenceReport rep;
  rep.values = std::move(values);
  rep.normalization = std::move(normalization);

  rep.strictly_decreasing = true;
  for (std::size_t i = 1; i < K; ++i)
    if (!(rep.values[i] < rep.values[i - 1])) rep.strictly_decreasing = false;

  const double first = rep.values.front();
  const double last = rep.values.back();
  rep.decay_ratio = first != 0.0 ? last / first : 0.0;

  // Decay trend of log Q: fit against log k (power decay) and against k
  // (geometric decay), keep the better model. A strictly accelerating decay
  // (log-ratios nonincreasing) is decisive on its own even when it outruns
  // both models.
  std::vector<double> lk, kk, ys;
  for (std::size_t i = 0; i < K; ++i) {
    if (!(rep.values[i] > 0.0)) continue;
    lk.push_back(std::log(static_cast<double>(i + 1)));
    kk.push_back(static_cast<double>(i + 1));
    ys.push_back(std::log(rep.values[i]));
  }
  auto fit_line = [](const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
    }
    const double det = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / det;
    const double icept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean = sy / n;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - (icept + slope * x[i]);
      ss_res += e * e;
      ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    const double r2 = ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
    return std::pair<double, double>{slope, r2};
  };
  if (ys.size() >= 3) {
    auto [slope_lk, r2_lk] = fit_line(lk, ys);
    auto [slope_k, r2_k] = fit_line(kk, ys);
    if (r2_k > r2_lk) {
      rep.fitted_exponent = slope_k;
      rep.fit_confidence = r2_k;
    } else {
      rep.fitted_exponent = slope_lk;
      rep.fit_confidence = r2_lk;
    }
    bool accelerating = ys.size() == K && rep.strictly_decreasing;
    for (std::size_t i = 2; i < ys.size() && accelerating; ++i)
      accelerating = (ys[i] - ys[i - 1]) <= (ys[i - 1] - ys[i - 2]) * 0.95 + 1e-12;
    if (accelerating && rep.fitted_exponent < 0.0)
      rep.fit_confidence = std::max(rep.fit_confidence, 0.95);
  }

  if (!rep.normalization.empty()) {
    double lo = rep.normalization.front(), hi = lo;
    for (double x : rep.normalization) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    const double mid = 0.5 * (lo + hi);
    rep.normalization_stable = mid > 0.0 && lo >= 0.9 * mid && hi <= 1.1 * mid;
  } else {
    rep.normalization_stable = true;
  }

  const bool decayed = rep.decay_ratio <= convention.decay_fraction && first > 0.0;
  const bool trending = rep.fitted_exponent < 0.0 &&
                        rep.fit_confidence >= convention.min_confidence;
  rep.is_null = rep.strictly_decreasing && decayed && trending && rep.normalization_stable;

  if (rep.is_null) {
    rep.diagnosis = "null sequence trend confirmed";
  } else if (!rep.normalization_stable) {
    rep.diagnosis = "normalization not stable across the family";
  } else if (!rep.strictly_decreasing) {
    rep.diagnosis = "values not strictly decreasing";
  } else if (!decayed) {
    rep.diagnosis = "decay ratio above the convention fraction";
  } else {
    rep.diagnosis = "decay trend below the confidence gate";
  }
  return rep;
}

SequenceReport verify_null_sequence(const CutoffFamily& family, const ScalarField& v,
                                    const ProblemSpec& spec,
                                    std::optional<std::pair<double, double>> window,
                                    const DecayConvention& convention) {
  const int K = family.size();
  if (K < 3) throw std::invalid_argument("verify_null_sequence: need K >= 3");
  const auto B = window.value_or(family.window());
  if (!(B.first < B.second))
    throw std::invalid_argument("verify_null_sequence: empty normalization window");

  const double p = spec.exponent.p();
  const double d = spec.dimension.d();
  const double cd = sphere_constant(spec.dimension);

  std::vector<double> q(K), norm(K);
  parallel_for(static_cast<std::size_t>(K), [&](std::size_t i) {
    const int k = static_cast<int>(i) + 1;
    const auto w = family.member(k);
    const auto grid = energy::support_grid(family, k, spec);
    const auto u = product(v, w);
    q[i] = energy::energy_Q(u, spec, grid).total;

    auto norm_integrand = [&](double r) {
      return std::pow(std::abs(u.value(r)) * std::pow(r, (d - 1.0) / p), p);
    };
    quad::QuadOptions qo;
    qo.breakpoints = u.knots();
    norm[i] = cd * quad::integrate(norm_integrand, B.first, B.second, qo).value;
  });

  auto rep = judge_sequence(std::move(q), std::move(norm), convention);
  if (!rep.normalization.empty() && rep.normalization.back() <= 0.0) {
    rep.is_null = false;
    rep.diagnosis = "normalization collapsed to zero (field vanishes on the window)";
  }
  return rep;
}

// --- integral criteria ------------------------------------------------------

namespace {

quad::TailOptions tail_options(const TailProbeOptions& opts, double max_arg) {
  quad::TailOptions t;
  t.per_octave = opts.per_octave;
  t.max_argument = std::min(opts.max_argument, max_arg);
  return t;
}

// Slopes composed from exact inputs land within rounding of zero when the
// linear parts cancel; anything below this threshold is that cancellation.
inline double clamp_slope(double c) { return std::abs(c) < 1e-9 ? 0.0 : c; }

// Verdict for a substituted integrand log g(t) = c_lin * t + y(t) with
// subpolynomial y: a nonzero linear coefficient decides immediately
// (exponential growth/decay in t); otherwise Bertrand-classify y.
quad::TailVerdict classify_substituted(double c_lin, double r_power,
                                       const std::function<double(double)>& y, double t0,
                                       const TailProbeOptions& opts) {
  if (clamp_slope(c_lin) != 0.0) {
    quad::TailVerdict v;
    v.verdict = c_lin > 0.0 ? quad::Convergence::divergent : quad::Convergence::convergent;
    v.power_x = r_power;  // r-space power of the original integrand
    v.power_log = 0.0;
    v.confidence = std::min(1.0, std::abs(c_lin) / 0.2);
    v.note = "pure power verdict from the substituted-integrand slope";
    return v;
  }
  auto v = quad::classify_tail_log(y, t0, quad::TailDirection::toward_infinity,
                                   tail_options(opts, 1.2e18));
  v.note += (v.note.empty() ? "" : "; ");
  v.note += "probed in t = log r";
  return v;
}

} // namespace

IntegralClassification M1_integral(const ScalarField& phi, Exponent pe, Dimension de,
                                   const RadialDomain& domain, const TailProbeOptions& opts) {
  const double p = pe.p(), d = de.d();
  IntegralClassification out;

  const double r_lo = std::max(opts.r0, 2.0 * std::max(domain.r_min, 1.0));
  if (phi.has_log_form()) {
    // with log phi = s t + corr(t), the substituted integrand has
    // log g(t) = (p - d - p s)/(p-1) * t - p corr(t)/(p-1)
    const auto& tail = phi.log_tail_infinity();
    const double c_lin = (p - d - p * tail.slope) / (p - 1.0);
    const auto corr = tail.correction;
    auto y = [corr, p](double t) { return -p * corr(t) / (p - 1.0); };
    out.at_infinity = classify_substituted(c_lin, c_lin - 1.0, y,
                                           std::max(2.0, std::log(r_lo)), opts);
  } else {
    auto f = [&phi, p, d](double r) {
      const double v = phi.value(r);
      if (!(v > 0.0)) return std::nan("");
      return std::exp(-(p * std::log(v) + (d - 1.0) * std::log(r)) / (p - 1.0));
    };
    out.at_infinity = quad::classify_tail(f, r_lo, quad::TailDirection::toward_infinity,
                                          tail_options(opts, opts.max_argument));
  }

  if (domain.punctured) {
    if (phi.has_log_tail_zero()) {
      // tau = -log r: log g0(tau) = (p s0 + d - p)/(p-1) * tau - p corr0(-tau)/(p-1)
      const auto& tail0 = phi.log_tail_zero();
      const double c_lin = (p * tail0.slope + d - p) / (p - 1.0);
      const auto corr = tail0.correction;
      auto y = [corr, p](double tau) { return -p * corr(-tau) / (p - 1.0); };
      out.at_zero = classify_substituted(c_lin, -c_lin - 1.0, y, 2.0, opts);
    } else {
      auto f = [&phi, p, d](double r) {
        const double v = phi.value(r);
        if (!(v > 0.0)) return std::nan("");
        return std::exp(-(p * std::log(v) + (d - 1.0) * std::log(r)) / (p - 1.0));
      };
      out.at_zero = quad::classify_tail(f, 1.0 / opts.r0, quad::TailDirection::toward_zero,
                                        tail_options(opts, opts.max_argument));
    }
  }
  return out;
}

IntegralClassification M2_integral(const ScalarField& phi, Exponent pe, Dimension de,
                                   const RadialDomain& domain, const TailProbeOptions& opts) {
  const double p = pe.p(), d = de.d();
  if (!(p > 2.0)) throw std::invalid_argument("M2_integral: requires p > 2");
  if (!(d >= 2.0)) throw std::invalid_argument("M2_integral: requires d >= 2");

  IntegralClassification out;
  const double r_lo = std::max(opts.r0, 2.0 * std::max(domain.r_min, 1.0));

  // A gradient vanishing identically along the tail makes the integrand
  // infinite: divergent by convention, flagged distinctly.
  {
    bool all_zero = true;
    for (int j = 0; j < 8 && all_zero; ++j)
      all_zero = phi.derivative(r_lo * std::pow(2.0, j)) == 0.0;
    if (all_zero) {
      out.at_infinity.verdict = quad::Convergence::divergent;
      out.at_infinity.degenerate_gradient = true;
      out.at_infinity.note = "degenerate gradient: |phi'|^{2-p} is infinite on the tail";
      if (domain.punctured) out.at_zero = out.at_infinity;
      return out;
    }
  }

  if (phi.has_log_form()) {
    // log|phi'(e^t)| = log phi + log|lambda(t)| - t with lambda = dlog/dlogr,
    // so the substituted integrand splits as
    //   log g(t) = (p - d - p s) t - p corr(t) + (2-p) log|lambda(t)|.
    const auto& tail = phi.log_tail_infinity();
    const double c_lin = p - d - p * tail.slope;
    const auto corr = tail.correction;
    auto y = [&phi, corr, p](double t) {
      const double lam = phi.dlog_dlogr_at(t);
      if (lam == 0.0) return std::nan("");
      return -p * corr(t) + (2.0 - p) * std::log(std::abs(lam));
    };
    out.at_infinity = classify_substituted(c_lin, c_lin - 1.0, y,
                                           std::max(2.0, std::log(r_lo)), opts);
    if (domain.punctured && phi.has_log_tail_zero()) {
      const auto& tail0 = phi.log_tail_zero();
      const double c_lin0 = p * tail0.slope + d - p;
      const auto corr0 = tail0.correction;
      auto y0 = [&phi, corr0, p](double tau) {
        const double lam = phi.dlog_dlogr_at(-tau);
        if (lam == 0.0) return std::nan("");
        return -p * corr0(-tau) + (2.0 - p) * std::log(std::abs(lam));
      };
      out.at_zero = classify_substituted(c_lin0, -c_lin0 - 1.0, y0, 2.0, opts);
    }
    return out;
  }

  auto f = [&phi, p, d](double r) {
    const double v = phi.value(r);
    const double dv = std::abs(phi.derivative(r));
    if (!(v > 0.0) || !(dv >= 0.0)) return std::nan("");
    if (dv == 0.0) return std::numeric_limits<double>::infinity();
    return std::exp(-2.0 * std::log(v) + (2.0 - p) * std::log(dv) +
                    (1.0 - d) * std::log(r));
  };
  out.at_infinity = quad::classify_tail(f, r_lo, quad::TailDirection::toward_infinity,
                                        tail_options(opts, opts.max_argument));
  if (domain.punctured)
    out.at_zero = quad::classify_tail(f, 1.0 / opts.r0, quad::TailDirection::toward_zero,
                                      tail_options(opts, opts.max_argument));
  return out;
}

quad::TailVerdict M2_tilde_eta(double gamma, Exponent pe, const TailProbeOptions& opts) {
  const double p = pe.p();
  if (!(p > 2.0)) throw std::invalid_argument("M2_tilde_eta: requires p > 2");
  auto logg = [gamma, p](double t) {
    return (1.0 - p) * std::log(t) + gamma * (2.0 - p) * std::log(std::log(t));
  };
  return quad::classify_tail_log(logg, 3.0, quad::TailDirection::toward_infinity,
                                 tail_options(opts, 1.2e18));
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::ground_state: return "GroundState";
    case Verdict::spectral_gap: return "SpectralGap";
    default: return "Inconclusive";
  }
}

ClassificationVerdict classify_ground_state(const ScalarField& phi, Exponent pe, Dimension de,
                                            const RadialDomain& domain,
                                            const TailProbeOptions& opts) {
  const double p = pe.p();
  const int d = de.d();
  ClassificationVerdict cv;
  cv.M1 = M1_integral(phi, pe, de, domain, opts);
  cv.p_vs_d = p <= d ? "p <= d" : "p > d";

  const auto m1 = cv.M1.at_infinity.verdict;
  const bool use_m2 = pe.super_quadratic() && d >= 2;
  if (use_m2) cv.M2 = M2_integral(phi, pe, de, domain, opts);

  if (p > d) {
    cv.verdict = Verdict::spectral_gap;
    cv.rationale = "gradient part has no null sequence for p > d";
    return cv;
  }
  if (m1 == quad::Convergence::convergent) {
    cv.verdict = Verdict::spectral_gap;
    cv.rationale = "M1 finite: gradient part has a weighted spectral gap";
    return cv;
  }
  if (use_m2) {
    const auto m2 = cv.M2->at_infinity.verdict;
    if (m2 == quad::Convergence::convergent) {
      cv.verdict = Verdict::spectral_gap;
      cv.rationale = "M2 finite: second split term has a weighted spectral gap";
      return cv;
    }
    if (m1 == quad::Convergence::divergent && m2 == quad::Convergence::divergent) {
      cv.verdict = Verdict::ground_state;
      cv.rationale = "M1 and M2 infinite with p <= d";
      return cv;
    }
  } else if (m1 == quad::Convergence::divergent) {
    cv.verdict = Verdict::ground_state;
    cv.rationale = "M1 infinite with p <= d";
    return cv;
  }
  cv.verdict = Verdict::inconclusive;
  cv.rationale = "tail classification inconclusive";
  return cv;
}

// --- comparison transfer ------------------------------------------------------

const char* to_string(TransferOutcome o) {
  switch (o) {
    case TransferOutcome::transferred: return "transferred";
    case TransferOutcome::conditions_failed: return "ConditionsFailed";
    case TransferOutcome::base_not_null: return "BaseNotNull";
    default: return "NotTransferred";
  }
}

ConditionReport check_transfer_conditions(const ScalarField& phi, const ScalarField& psi,
                                          Exponent pe, double C_budget,
                                          const RadialGrid& grid) {
  const double p = pe.p();
  ConditionReport rep;
  rep.budget = C_budget;

  int support_nodes = 0;
  for (double r : grid.nodes()) {
    const double pv = psi.value(r);
    if (!(pv > 0.0)) continue;
    ++support_nodes;
    const double fv = phi.value(r);
    rep.C_value = std::max(rep.C_value, pv / fv);

    const double dpsi = std::abs(psi.derivative(r));
    const double dphi = std::abs(phi.derivative(r));
    double grad_ratio;
    if (dpsi == 0.0 && dphi == 0.0)
      grad_ratio = 1.0;
    else if (dphi == 0.0)
      grad_ratio = p > 2.0 ? std::numeric_limits<double>::infinity() : 0.0;
    else if (dpsi == 0.0)
      grad_ratio = p > 2.0 ? 0.0 : std::numeric_limits<double>::infinity();
    else
      grad_ratio = std::pow(dpsi / dphi, p - 2.0);
    rep.C_grad = std::max(rep.C_grad, grad_ratio);
    rep.C_grad_alt = std::max(rep.C_grad_alt, (pv / fv) * (pv / fv) * grad_ratio);
  }
  if (support_nodes == 0) {
    rep.note = "psi has no positive values on the grid";
    return rep;
  }
  rep.value_pass = rep.C_value <= C_budget;
  rep.grad_pass = rep.C_grad <= C_budget;
  rep.grad_alt_pass = rep.C_grad_alt <= C_budget;
  if (rep.grad_pass && !rep.grad_alt_pass)
    rep.note = "gradient condition holds; product-form variant fails";
  else if (!rep.grad_pass && rep.grad_alt_pass)
    rep.note = "product-form variant holds; plain gradient condition fails";
  return rep;
}

TransferReport transfer_null_sequence(const ScalarField& phi, const ScalarField& psi,
                                      const ProblemSpec& spec0, const ProblemSpec& spec1,
                                      const CutoffFamily& family,
                                      const TransferOptions& opts) {
  TransferReport rep;

  // certifications: phi solves spec1, psi subsolves spec0
  solutions::CertifyOptions co;
  co.points = 16;
  co.lo = std::max(opts.condition_range.first, 1e-3);
  co.hi = std::min(opts.condition_range.second, 1e3);
  co.tolerance = opts.certification_tol;
  const auto cert_phi = solutions::certify(phi, spec1, solutions::ResidualMode::weak, co);
  const auto cert_psi = solutions::certify(psi, spec0, solutions::ResidualMode::weak, co);
  const bool phi_ok =
      solutions::verdict_matches(cert_phi, solutions::SolutionStatus::solution);
  const bool psi_ok =
      solutions::verdict_matches(cert_psi, solutions::SolutionStatus::subsolution);

  auto grid = make_grid(spec0.domain, 24, opts.condition_range.first,
                        opts.condition_range.second);
  rep.conditions = check_transfer_conditions(phi, psi, spec0.exponent, opts.C_budget, grid);
  if (!phi_ok)
    rep.conditions.note += (rep.conditions.note.empty() ? "" : "; ") +
                           std::string("phi failed solution certification for spec1");
  if (!psi_ok)
    rep.conditions.note += (rep.conditions.note.empty() ? "" : "; ") +
                           std::string("psi failed subsolution certification for spec0");

  if (!rep.conditions.admissible() || !phi_ok || !psi_ok) {
    rep.outcome = TransferOutcome::conditions_failed;
    return rep;
  }

  rep.base = verify_null_sequence(family, phi, spec1, std::nullopt, opts.convention);
  if (!rep.base.is_null) {
    rep.outcome = TransferOutcome::base_not_null;
    return rep;
  }

  const ScalarField psi_plus = psi.positive() ? psi : solutions::positive_part(psi);
  const int K = family.size();
  rep.q0_direct.resize(K);
  rep.q0_bound.resize(K);
  rep.normalization.resize(K);
  const double p = spec0.exponent.p();
  const double d = spec0.dimension.d();
  const double cd = sphere_constant(spec0.dimension);
  const auto B = family.window();

  parallel_for(static_cast<std::size_t>(K), [&](std::size_t i) {
    const int k = static_cast<int>(i) + 1;
    const auto w = family.member(k);
    const auto grid_k = energy::support_grid(family, k, spec0);
    const auto u = product(psi_plus, w);
    rep.q0_direct[i] = energy::energy_Q(u, spec0, grid_k).total;
    rep.q0_bound[i] =
        energy::simplified_energy(psi_plus, w, spec0.exponent, spec0.dimension, grid_k);

    auto norm_integrand = [&](double r) {
      return std::pow(std::abs(u.value(r)) * std::pow(r, (d - 1.0) / p), p);
    };
    quad::QuadOptions qo;
    qo.breakpoints = u.knots();
    rep.normalization[i] = cd * quad::integrate(norm_integrand, B.first, B.second, qo).value;
  });

  rep.transferred = judge_sequence(rep.q0_direct, rep.normalization, opts.convention);
  rep.normalization_stable = rep.transferred.normalization_stable;
  rep.outcome = rep.transferred.is_null ? TransferOutcome::transferred
                                        : TransferOutcome::not_transferred;
  return rep;
}

} // namespace gslab::nullseq
