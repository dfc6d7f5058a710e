#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gslab/energy.hpp"
#include "gslab/nullseq.hpp"
#include "gslab/solutions.hpp"

using namespace gslab;
using namespace gslab::nullseq;
using quad::Convergence;

TEST_CASE("log cutoff shape: plateau, ramps, support") {
  auto family = log_cutoff_family(3, 10.0, RadialDomain::punctured_ray());
  const auto w = family.member(1);  // R_1 = 10 under both schedules
  CHECK(family.inner_zero(1) == doctest::Approx(0.01));
  CHECK(family.outer_zero(1) == doctest::Approx(100.0));
  CHECK(w.value(0.005) == 0.0);
  CHECK(w.value(family.inner_zero(1)) == 0.0);
  CHECK(w.value(0.1) == doctest::Approx(1.0));
  CHECK(w.value(1.0) == 1.0);
  CHECK(w.value(10.0) == doctest::Approx(1.0));
  CHECK(w.value(family.outer_zero(1)) == 0.0);
  CHECK(w.value(300.0) == 0.0);
  // log-linear ramp: halfway in log coordinates
  CHECK(w.value(std::sqrt(0.01 * 0.1)) == doctest::Approx(0.5));
  CHECK(w.value(std::sqrt(10.0 * 100.0)) == doctest::Approx(0.5));
  // derivative 1/(r log R) on the up ramp
  CHECK(w.derivative(0.03) == doctest::Approx(1.0 / (0.03 * std::log(10.0))));
  CHECK(w.derivative(30.0) == doctest::Approx(-1.0 / (30.0 * std::log(10.0))));

  CHECK_THROWS_AS(log_cutoff_family(2, 10.0, RadialDomain::punctured_ray()),
                  std::invalid_argument);
  CHECK_THROWS_AS(log_cutoff_family(4, 4.0, RadialDomain(0.5, 1.0, false)),
                  std::invalid_argument);
}

TEST_CASE("cutoffs tend to 1 on compact subsets") {
  auto family = log_cutoff_family(6, 4.0, RadialDomain::punctured_ray());
  for (double r : {0.02, 0.5, 1.0, 7.0, 40.0}) {
    const auto wK = family.member(6);
    CHECK(wK.value(r) == 1.0);
  }
  // monotone pointwise in k once the plateau reaches r
  for (int k = 2; k <= 6; ++k)
    CHECK(family.member(k).value(3.0) >= family.member(k - 1).value(3.0) - 1e-15);
}

TEST_CASE("smooth profile stays within [0,1] and is C1 at the plateau") {
  auto family = log_cutoff_family(3, 8.0, RadialDomain::punctured_ray(),
                                  CutoffProfile::smooth);
  const auto w = family.member(2);
  const double b = family.plateau_lo(2);
  CHECK(w.value(b * (1.0 - 1e-9)) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(w.derivative(b * (1.0 - 1e-9))) < 1e-6);
  for (double r = family.inner_zero(2); r < family.outer_zero(2); r *= 1.3) {
    CHECK(w.value(r) >= 0.0);
    CHECK(w.value(r) <= 1.0);
  }
}

TEST_CASE("hardy null sequence decays at the closed-form log-ramp rate") {
  auto fam = solutions::make_family("hardy_phi", Exponent(2), Dimension(3));
  const auto spec = fam.spec();
  // linear schedule: Q(phi w_k) = 2 C_d / (k log R) exactly
  auto family = log_cutoff_family(5, 10.0, spec.domain, CutoffProfile::log_linear,
                                  CutoffSchedule::linear);
  const double cd = sphere_constant(spec.dimension);
  for (int k = 1; k <= 5; ++k) {
    const auto u = product(fam.field, family.member(k));
    const auto grid = energy::support_grid(family, k, spec);
    const double q = energy::energy_Q(u, spec, grid).total;
    CHECK(q == doctest::Approx(2.0 * cd / (k * std::log(10.0))).epsilon(1e-8));
  }
}

TEST_CASE("verify_null_sequence: hardy yes, free spectral-gap case no") {
  auto fam = solutions::make_family("hardy_phi", Exponent(2), Dimension(3));
  auto family = log_cutoff_family(6, 4.0, fam.domain);  // geometric ramps
  auto rep = verify_null_sequence(family, fam.field, fam.spec());
  CHECK(rep.strictly_decreasing);
  CHECK(rep.is_null);
  CHECK(rep.decay_ratio <= 0.05);
  CHECK(rep.fitted_exponent < 0.0);
  CHECK(rep.fit_confidence >= 0.9);
  CHECK(rep.normalization_stable);

  // d > p with V = 0: the constant solution is not a ground state
  auto c = solutions::make_family("constant", Exponent(2), Dimension(3));
  auto family2 = log_cutoff_family(5, 4.0, c.domain);
  auto rep2 = verify_null_sequence(family2, c.field, c.spec());
  CHECK(!rep2.is_null);
  CHECK(rep2.values.back() > rep2.values.front());  // energies grow with support

  // d <= p with V = 0: the constant is a ground state
  for (int d : {1, 2}) {
    auto cd_fam = solutions::make_family("constant", Exponent(2), Dimension(d));
    auto family3 = log_cutoff_family(6, 4.0, cd_fam.domain);
    auto rep3 = verify_null_sequence(family3, cd_fam.field, cd_fam.spec());
    CHECK(rep3.is_null);
  }
}

TEST_CASE("M1 criterion: constant field switches at d = p") {
  auto c = solutions::make_family("constant", Exponent(3), Dimension(5));
  auto m = M1_integral(c.field, Exponent(3), Dimension(5), c.domain);
  CHECK(m.at_infinity.verdict == Convergence::convergent);

  for (int d : {1, 2, 3}) {  // d <= p = 3
    auto cc = solutions::make_family("constant", Exponent(3), Dimension(d));
    auto mm = M1_integral(cc.field, Exponent(3), Dimension(d), cc.domain);
    CHECK(mm.at_infinity.verdict == Convergence::divergent);
  }
}

TEST_CASE("M1 for the hardy field is exactly harmonic") {
  for (auto [p, d] : {std::pair{2.0, 3}, {3.0, 5}, {2.5, 3}, {3.0, 2}}) {
    auto fam = solutions::make_family("hardy_phi", Exponent(p), Dimension(d));
    auto m = M1_integral(fam.field, Exponent(p), Dimension(d), fam.domain);
    CHECK(m.at_infinity.verdict == Convergence::divergent);
    REQUIRE(m.at_zero.has_value());
    // integrand is r^{-1} exactly: the zero-side tail diverges as well
    CHECK(m.at_zero->verdict == Convergence::divergent);
  }
}

TEST_CASE("M2: hardy divergent by symbolic exponent, constant degenerate") {
  // phi = r^e: phi^{-2} |phi'|^{2-p} r^{1-d} has exponent
  // -2e + (e-1)(2-p) + 1 - d = -1 for every p, d (symbolic oracle)
  const double p = 3, d = 5, e = (p - d) / p;
  CHECK(-2.0 * e + (e - 1.0) * (2.0 - p) + 1.0 - d == doctest::Approx(-1.0));
  auto fam = solutions::make_family("hardy_phi", Exponent(p), Dimension(5));
  auto m = M2_integral(fam.field, Exponent(p), Dimension(5), fam.domain);
  CHECK(m.at_infinity.verdict == Convergence::divergent);

  auto c = solutions::make_family("constant", Exponent(3), Dimension(5));
  auto mc = M2_integral(c.field, Exponent(3), Dimension(5), c.domain);
  CHECK(mc.at_infinity.verdict == Convergence::divergent);
  CHECK(mc.at_infinity.degenerate_gradient);

  CHECK_THROWS_AS(M2_integral(fam.field, Exponent(2), Dimension(5), fam.domain),
                  std::invalid_argument);
  CHECK_THROWS_AS(M2_integral(fam.field, Exponent(3), Dimension(1), fam.domain),
                  std::invalid_argument);
}

TEST_CASE("eta family: M1 switches at gamma = (p-1)/(p-2), M2 stays finite") {
  const Exponent p3(3);
  const Dimension d5(5);
  // gamma <= (p-1)/(p-2) = 2: M1 divergent
  for (double gamma : {0.5, 1.0, 1.7}) {
    auto phi = make_eta_phi(gamma, p3, d5);
    auto m = M1_integral(phi, p3, d5, RadialDomain::exterior(16.0));
    CHECK(m.at_infinity.verdict == Convergence::divergent);
  }
  for (double gamma : {2.5, 3.0}) {
    auto phi = make_eta_phi(gamma, p3, d5);
    auto m = M1_integral(phi, p3, d5, RadialDomain::exterior(16.0));
    CHECK(m.at_infinity.verdict == Convergence::convergent);
  }
  // M2 convergent throughout the family
  for (double gamma : {0.5, 1.0, 1.7, 3.0}) {
    auto phi = make_eta_phi(gamma, p3, d5);
    auto m = M2_integral(phi, p3, d5, RadialDomain::exterior(16.0));
    CHECK(m.at_infinity.verdict == Convergence::convergent);
    // comparison form integral t^{1-p} (log t)^{gamma(2-p)}: same verdict
    CHECK(M2_tilde_eta(gamma, p3).verdict == m.at_infinity.verdict);
  }
  CHECK_THROWS_AS(make_eta_phi(1.0, Exponent(2.0), d5), std::invalid_argument);
  CHECK_THROWS_AS(make_eta_phi(1.0, p3, Dimension(3)), std::invalid_argument);
  CHECK_THROWS_AS(make_eta_phi(1.0, p3, d5).value(10.0), std::domain_error);
}

TEST_CASE("oscillatory field: construction and envelope") {
  for (double beta : {-0.2, 0.4}) {
    auto psi = make_oscillatory_psi(beta);
    // prescribed derivative magnitudes on the two interval types
    const double r_exp = 10.5;   // inside [2n+1/4, 2n+3/4] for n = 5
    const double r_pow = 11.5;   // inside [2n+1, 2n+2]
    CHECK(std::abs(psi.derivative(r_exp)) == doctest::Approx(std::exp(-r_exp)));
    CHECK(std::abs(psi.derivative(r_pow)) ==
          doctest::Approx(std::abs(beta) * std::pow(r_pow, beta - 1.0)));
    // monotone, sign fixed by beta
    double prev = psi.value(2.0);
    for (double r = 2.5; r < 200.0; r *= 1.17) {
      const double v = psi.value(r);
      if (beta > 0) CHECK(v > prev);
      if (beta < 0) CHECK(v < prev);
      prev = v;
    }
    // two-sided power envelope
    for (double r = 10.0; r < 1e4; r *= 3.7) {
      const double ratio = psi.value(r) / std::pow(r, beta);
      CHECK(ratio > 0.1);
      CHECK(ratio < 10.0);
    }
  }
  CHECK_THROWS_AS(make_oscillatory_psi(0.0), std::invalid_argument);
}

TEST_CASE("oscillatory field: M1 convergent, M2 divergent, blend-insensitive") {
  const Exponent p3(3);
  const Dimension d5(5);
  const RadialDomain dom = RadialDomain::exterior(1.0);
  TailProbeOptions opts;
  opts.max_argument = oscillatory_psi_max_radius() / 4.0;
  for (auto blend : {BlendKind::quintic, BlendKind::cubic}) {
    auto psi = make_oscillatory_psi(-0.2, blend);
    auto m1 = M1_integral(psi, p3, d5, dom, opts);
    CHECK(m1.at_infinity.verdict == Convergence::convergent);
    auto m2 = M2_integral(psi, p3, d5, dom, opts);
    CHECK(m2.at_infinity.verdict == Convergence::divergent);
  }
}

TEST_CASE("ground-state classification across the corpus") {
  auto hardy23 = solutions::make_family("hardy_phi", Exponent(2), Dimension(3));
  CHECK(classify_ground_state(hardy23.field, Exponent(2), Dimension(3), hardy23.domain)
            .verdict == Verdict::ground_state);

  auto hardy35 = solutions::make_family("hardy_phi", Exponent(3), Dimension(5));
  CHECK(classify_ground_state(hardy35.field, Exponent(3), Dimension(5), hardy35.domain)
            .verdict == Verdict::ground_state);

  auto c23 = solutions::make_family("constant", Exponent(2), Dimension(3));
  CHECK(classify_ground_state(c23.field, Exponent(2), Dimension(3), c23.domain).verdict ==
        Verdict::spectral_gap);

  auto c22 = solutions::make_family("constant", Exponent(2), Dimension(2));
  CHECK(classify_ground_state(c22.field, Exponent(2), Dimension(2), c22.domain).verdict ==
        Verdict::ground_state);

  // eta: gradient part degenerates but the second split term has a gap
  auto eta = make_eta_phi(1.0, Exponent(3), Dimension(5));
  auto cv = classify_ground_state(eta, Exponent(3), Dimension(5),
                                  RadialDomain::exterior(16.0));
  CHECK(cv.verdict == Verdict::spectral_gap);
  CHECK(cv.M1.at_infinity.verdict == Convergence::divergent);
  REQUIRE(cv.M2.has_value());
  CHECK(cv.M2->at_infinity.verdict == Convergence::convergent);

  TailProbeOptions opts;
  opts.max_argument = oscillatory_psi_max_radius() / 4.0;
  auto osc = make_oscillatory_psi(-0.2);
  auto cv2 = classify_ground_state(osc, Exponent(3), Dimension(5),
                                   RadialDomain::exterior(1.0), opts);
  CHECK(cv2.verdict == Verdict::spectral_gap);
  CHECK(cv2.M1.at_infinity.verdict == Convergence::convergent);
  CHECK(cv2.M2->at_infinity.verdict == Convergence::divergent);
}

TEST_CASE("transfer conditions: identity, scaling, comparison example") {
  auto h = solutions::make_family("hardy_phi", Exponent(3), Dimension(5));
  auto grid = make_grid(h.domain, 16, 1e-4, 1e4);

  auto self = check_transfer_conditions(h.field, h.field, Exponent(3), 10.0, grid);
  CHECK(self.C_value == doctest::Approx(1.0));
  CHECK(self.C_grad == doctest::Approx(1.0));
  CHECK(self.C_grad_alt == doctest::Approx(1.0));
  CHECK(self.admissible());

  // psi = 2 phi: C_value = 2, plain gradient constant 2^{p-2}, product form 2^p
  auto doubled = ScalarField::closed_form(
      "2phi", [h](double r) { return 2.0 * h.field.value(r); },
      [h](double r) { return 2.0 * h.field.derivative(r); }, true);
  auto scaled = check_transfer_conditions(h.field, doubled, Exponent(3), 10.0, grid);
  CHECK(scaled.C_value == doctest::Approx(2.0));
  CHECK(scaled.C_grad == doctest::Approx(2.0));       // 2^{p-2}, p = 3
  CHECK(scaled.C_grad_alt == doctest::Approx(8.0));   // 2^p

  // psi_alpha against hardy inside d/(d-1) < p < d
  auto hh = solutions::make_family("hardy_phi", Exponent(2.5), Dimension(3));
  auto psi = solutions::make_family("psi_alpha", Exponent(2.5), Dimension(3),
                                    {{"alpha", 1.0}});
  auto grid2 = make_grid(hh.domain, 16, 1e-4, 1e4);
  auto cond = check_transfer_conditions(hh.field, psi.field, Exponent(2.5), 10.0, grid2);
  CHECK(cond.C_value <= 1.0 + 1e-12);
  CHECK(cond.value_pass);
  CHECK(cond.grad_alt_pass);
  CHECK(cond.admissible());
}

TEST_CASE("transfer engine: self-transfer is exact") {
  auto h = solutions::make_family("hardy_phi", Exponent(2), Dimension(3));
  auto family = log_cutoff_family(6, 4.0, h.domain);
  auto rep = transfer_null_sequence(h.field, h.field, h.spec(), h.spec(), family);
  CHECK(rep.outcome == TransferOutcome::transferred);
  REQUIRE(rep.q0_direct.size() == rep.base.values.size());
  for (std::size_t i = 0; i < rep.q0_direct.size(); ++i)
    CHECK(rep.q0_direct[i] == doctest::Approx(rep.base.values[i]).epsilon(1e-8));
}

TEST_CASE("transfer engine: comparison family receives the hardy null sequence") {
  const Exponent p(2.5);
  const Dimension d(3);
  auto h = solutions::make_family("hardy_phi", p, d);
  auto psi = solutions::make_family("psi_alpha", p, d, {{"alpha", 1.0}});
  auto family = log_cutoff_family(6, 4.0, h.domain);
  auto rep = transfer_null_sequence(h.field, psi.field, psi.spec(), h.spec(), family);
  CHECK(rep.conditions.value_pass);
  CHECK(rep.conditions.grad_alt_pass);
  CHECK(rep.outcome == TransferOutcome::transferred);
  CHECK(rep.transferred.is_null);
  CHECK(rep.normalization_stable);
  // the one-sided bound pathway tracks the direct values from above (times a
  // bounded constant)
  for (std::size_t i = 0; i < rep.q0_direct.size(); ++i)
    CHECK(rep.q0_direct[i] <= 10.0 * rep.q0_bound[i]);
}

TEST_CASE("transfer engine refuses when conditions fail") {
  auto h = solutions::make_family("hardy_phi", Exponent(2.5), Dimension(3));
  auto big = ScalarField::closed_form(
      "10phi", [h](double r) { return 10.0 * h.field.value(r); },
      [h](double r) { return 10.0 * h.field.derivative(r); }, true);
  auto family = log_cutoff_family(4, 4.0, h.domain);
  nullseq::TransferOptions opts;
  opts.C_budget = 2.0;  // 10 phi violates psi <= C phi at this budget
  auto rep = transfer_null_sequence(h.field, big, h.spec(), h.spec(), family, opts);
  CHECK(rep.outcome == TransferOutcome::conditions_failed);
  CHECK(rep.q0_direct.empty());
}

TEST_CASE("transfer engine reports a non-null base family") {
  auto h = solutions::make_family("hardy_phi", Exponent(2), Dimension(3));
  // linear ramp schedule with few members: decay 1/k cannot meet the 0.05 gate
  auto family = log_cutoff_family(4, 4.0, h.domain, CutoffProfile::log_linear,
                                  CutoffSchedule::linear);
  auto rep = transfer_null_sequence(h.field, h.field, h.spec(), h.spec(), family);
  CHECK(rep.outcome == TransferOutcome::base_not_null);
}

TEST_CASE("judge_sequence diagnoses") {
  nullseq::DecayConvention conv;
  auto good = judge_sequence({8.0, 4.0, 2.0, 1.0, 0.5, 0.25, 0.125, 0.0625},
                             {1, 1, 1, 1, 1, 1, 1, 1}, conv);
  CHECK(good.is_null);
  auto flat = judge_sequence({1.0, 0.99, 0.98, 0.97}, {1, 1, 1, 1}, conv);
  CHECK(!flat.is_null);
  auto collapsed = judge_sequence({8, 4, 2, 1, 0.5, 0.2, 0.1, 0.01},
                                  {1, 1, 1, 1, 1, 0.2, 0.1, 0.0}, conv);
  CHECK(!collapsed.is_null);
  CHECK_THROWS_AS(judge_sequence({1.0, 0.5}, {1, 1}, conv), std::invalid_argument);
}
