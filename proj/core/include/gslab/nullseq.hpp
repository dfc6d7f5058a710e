#ifndef GSLAB_NULLSEQ_HPP
#define GSLAB_NULLSEQ_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gslab/cutoff.hpp"
#include "gslab/domain.hpp"
#include "gslab/quad.hpp"

namespace gslab::nullseq {

// --- profile fields -------------------------------------------------------

/// Positive field r^{1-d/p} eta(r) with eta = [t^{(p-1)/(p-2)} (log t)^gamma]^{(p-2)/p},
/// t = log r. Requires 2 < p < d and gamma > 0; lives on r > e^e so log log r
/// stays positive. Carries an exact log-scale form for deep tail probes.
ScalarField make_eta_phi(double gamma, Exponent p, Dimension d);

enum class BlendKind { quintic, cubic };

/// Smooth strictly monotone field with value envelope r^beta whose derivative
/// magnitude alternates between e^{-r} (on [2n+1/4, 2n+3/4]) and
/// |beta| r^{beta-1} (on [2n+1, 2n+2]), log-blended on the gaps. beta != 0;
/// increasing for beta > 0, decreasing to 0 for beta < 0. Lives on (1, inf);
/// evaluations are reliable up to max_radius().
ScalarField make_oscillatory_psi(double beta, BlendKind blend = BlendKind::quintic);

/// Largest radius the oscillatory field's piece table covers.
double oscillatory_psi_max_radius();

// --- decay sequences ------------------------------------------------------

struct DecayConvention {
  double decay_fraction = 0.05;  // last <= fraction * first
  double min_confidence = 0.9;   // of the fitted trend
};

struct SequenceReport {
  std::vector<double> values;          // Q(v w_k) (or the transferred form)
  std::vector<double> normalization;   // window integral of (v w_k)^p
  bool strictly_decreasing = false;
  double decay_ratio = 0.0;            // last / first
  double fitted_exponent = 0.0;        // slope of log value vs log k
  double fit_confidence = 0.0;
  bool normalization_stable = false;
  bool is_null = false;
  std::string diagnosis;
};

/// Evaluate Q(v w_k) across the family plus the window normalization, and
/// judge the null-sequence trend: strictly decreasing values, fitted decay
/// exponent < 0 at the requested confidence, last/first below the decay
/// fraction, and a k-stable normalization.
SequenceReport verify_null_sequence(const CutoffFamily& family, const ScalarField& v,
                                    const ProblemSpec& spec,
                                    std::optional<std::pair<double, double>> window = std::nullopt,
                                    const DecayConvention& convention = {});

// --- integral criteria ----------------------------------------------------

struct TailProbeOptions {
  double r0 = 8.0;            // tail probes start here (1/r0 toward zero)
  int per_octave = 1;         // 2 = refined probe density
  double max_argument = 1e300;
};

struct IntegralClassification {
  quad::TailVerdict at_infinity;
  std::optional<quad::TailVerdict> at_zero;  // punctured domains only
};

/// Tail classification of the integrand (phi^p r^{d-1})^{-1/(p-1)}. Fields
/// carrying a log-scale form are probed in t = log r, which resolves
/// iterated-log corrections far past the range of double.
IntegralClassification M1_integral(const ScalarField& phi, Exponent p, Dimension d,
                                   const RadialDomain& domain,
                                   const TailProbeOptions& opts = {});

/// Tail classification of phi^{-2} |phi'|^{2-p} r^{1-d} (p > 2, d >= 2). A
/// gradient vanishing identically along the tail is reported as
/// divergent-by-convention with the degenerate_gradient flag set.
IntegralClassification M2_integral(const ScalarField& phi, Exponent p, Dimension d,
                                   const RadialDomain& domain,
                                   const TailProbeOptions& opts = {});

/// Comparison integral for the eta family in t = log r:
/// integral t^{1-p} (log t)^{gamma(2-p)} dt.
quad::TailVerdict M2_tilde_eta(double gamma, Exponent p, const TailProbeOptions& opts = {});

enum class Verdict { ground_state, spectral_gap, inconclusive };
const char* to_string(Verdict v);

struct ClassificationVerdict {
  Verdict verdict = Verdict::inconclusive;
  IntegralClassification M1;
  std::optional<IntegralClassification> M2;  // p > 2, d >= 2 only
  std::string p_vs_d;
  std::string rationale;
};

/// Ground state vs weighted spectral gap for the energies split at phi:
/// the gradient part admits a null sequence iff M1 diverges and p <= d; for
/// p > 2 the second part additionally needs M2 divergent.
ClassificationVerdict classify_ground_state(const ScalarField& phi, Exponent p, Dimension d,
                                            const RadialDomain& domain,
                                            const TailProbeOptions& opts = {});

// --- comparison transfer --------------------------------------------------

struct ConditionReport {
  double C_value = 0.0;        // psi_+ <= C phi
  double C_grad = 0.0;         // |psi'|^{p-2} <= C |phi'|^{p-2} on {psi > 0}
  double C_grad_alt = 0.0;     // psi^2 |psi'|^{p-2} <= C phi^2 |phi'|^{p-2}
  bool value_pass = false;
  bool grad_pass = false;
  bool grad_alt_pass = false;
  double budget = 0.0;
  std::string note;

  bool admissible() const { return value_pass && (grad_pass || grad_alt_pass); }
};

/// Smallest empirical constants of the comparison conditions over a shared
/// grid restricted to {psi > 0}, tested against C_budget.
ConditionReport check_transfer_conditions(const ScalarField& phi, const ScalarField& psi,
                                          Exponent p, double C_budget,
                                          const RadialGrid& grid);

enum class TransferOutcome { transferred, conditions_failed, base_not_null, not_transferred };
const char* to_string(TransferOutcome o);

struct TransferReport {
  ConditionReport conditions;
  SequenceReport base;                  // Q1(phi w_k)
  std::vector<double> q0_direct;        // Q0(psi_+ w_k), the falsifiable output
  std::vector<double> q0_bound;         // one-sided simplified energy at psi_+
  std::vector<double> normalization;    // window integral of (psi_+ w_k)^p
  bool normalization_stable = false;
  SequenceReport transferred;           // trend judgement of q0_direct
  TransferOutcome outcome = TransferOutcome::not_transferred;
};

struct TransferOptions {
  double C_budget = 1e3;
  double certification_tol = 1e-6;
  std::pair<double, double> condition_range{1e-4, 1e4};
  DecayConvention convention{};
};

/// The comparison engine: given a certified positive solution phi of spec1
/// with a verified null family and a certified subsolution psi of spec0
/// satisfying the comparison conditions, drive Q0(psi_+ w_k) to zero. The
/// sequence is computed directly from the energy, not only through the chain
/// of bounds; failed preconditions yield a refusing outcome, not a claim.
TransferReport transfer_null_sequence(const ScalarField& phi, const ScalarField& psi,
                                      const ProblemSpec& spec0, const ProblemSpec& spec1,
                                      const CutoffFamily& family,
                                      const TransferOptions& opts = {});

/// Trend judgement shared by every decaying-sequence report.
SequenceReport judge_sequence(std::vector<double> values, std::vector<double> normalization,
                              const DecayConvention& convention);

} // namespace gslab::nullseq

#endif
