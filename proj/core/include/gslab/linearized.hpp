#ifndef GSLAB_LINEARIZED_HPP
#define GSLAB_LINEARIZED_HPP

#include <utility>
#include <vector>

#include "gslab/cutoff.hpp"
#include "gslab/domain.hpp"
#include "gslab/nullseq.hpp"

namespace gslab::linearized {

/// The quadratic form obtained by freezing a positive solution phi of the
/// p-growth functional:
///   a[u] = C_d integral (|phi'|^{p-2} |u'|^2 + V phi^{p-2} u^2) r^{d-1} dr.
/// For p < 2 the gradient weight blows up at zeros of phi'; such nodes are
/// flagged at construction, not resolved.
class QuadraticFormSpec {
 public:
  QuadraticFormSpec(ScalarField phi, ProblemSpec origin);

  double weight_grad(double r) const;  // |phi'|^{p-2}
  double weight_pot(double r) const;   // V phi^{p-2}
  const ScalarField& phi() const { return phi_; }
  const ProblemSpec& origin() const { return origin_; }
  const std::vector<double>& flagged_gradient_zeros() const { return flagged_; }

 private:
  ScalarField phi_;
  ProblemSpec origin_;
  std::vector<double> flagged_;
};

/// a[u] by radial quadrature; u must be compactly supported in the grid.
double quadratic_form_a(const ScalarField& u, const QuadraticFormSpec& qspec,
                        const RadialGrid& grid);

enum class PiconeMode { equality, subsolution };

struct LinearPiconeResult {
  double lhs = 0.0;  // a[psi v]
  double rhs = 0.0;  // C_d integral psi^2 |phi'|^{p-2} |v'|^2 r^{d-1}
  double certification_residual = 0.0;
  bool certified = false;
  bool holds = false;  // equality within tol, or lhs <= rhs + tol
};

/// Weighted-form identity a[psi v] = integral psi^2 A grad v . grad v for a
/// solution psi of the linearized equation (inequality <= for nonnegative
/// subsolutions). psi is certified against the weighted weak form first.
LinearPiconeResult linear_picone_check(const ScalarField& psi, const ScalarField& v,
                                       const QuadraticFormSpec& qspec,
                                       PiconeMode mode, double tol = 1e-6);

struct TransferSequence {
  std::vector<double> values;      // the transferred sequence
  std::vector<double> aux;         // second-route values (chain identity check)
  std::vector<double> normalization;
  double max_chain_residual = 0.0;
  nullseq::SequenceReport base;    // the input family's own null verdict
  nullseq::SequenceReport judgement;
};

/// p > 2 direction: from a null family w_k for Q at phi, the substitution
/// v_k = w_k^{p/2} gives a null family phi v_k for the quadratic form:
///   integral phi^2 |phi'|^{p-2} |v_k'|^2 = (p/2)^2 integral phi^2 |phi'|^{p-2} w^{p-2} |w'|^2.
/// Both routes are evaluated; their disagreement is the chain residual.
TransferSequence transfer_Q_to_a(const CutoffFamily& family, const ScalarField& phi,
                                 const ProblemSpec& spec,
                                 const nullseq::DecayConvention& convention = {});

/// p < 2 direction: from a family z_k = phi w_k null for the quadratic form,
/// w~_k = w_k^{2/p} gives Q(phi w~_k) -> 0.
TransferSequence transfer_a_to_Q(const CutoffFamily& family, const ScalarField& phi,
                                 const ProblemSpec& spec,
                                 const nullseq::DecayConvention& convention = {});

} // namespace gslab::linearized

#endif
