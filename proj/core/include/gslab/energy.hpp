#ifndef GSLAB_ENERGY_HPP
#define GSLAB_ENERGY_HPP

#include <string>
#include <utility>
#include <vector>

#include "gslab/cutoff.hpp"
#include "gslab/domain.hpp"

namespace gslab::energy {

struct EnergyBreakdown {
  double gradient_term = 0.0;   // C_d integral |u'|^p r^{d-1}
  double potential_term = 0.0;  // C_d integral V |u|^p r^{d-1}
  double total = 0.0;           // single pointwise-summed quadrature
  double error_estimate = 0.0;
};

/// Q(u) = C_d integral (|u'|^p + V |u|^p) r^{d-1} dr over the grid span.
/// u must be compactly supported inside the grid (checked; a leak throws).
EnergyBreakdown energy_Q(const ScalarField& u, const ProblemSpec& spec,
                         const RadialGrid& grid);

/// Q(vw) through the expanded product form
///   integral |v w' + w v'|^p - w^p |v'|^p - p w^{p-1} v |v'|^{p-2} v' w'.
/// Agrees with energy_Q(product(v, w)) when v is a positive solution.
double energy_Q_product(const ScalarField& v, const ScalarField& w,
                        const ProblemSpec& spec, const RadialGrid& grid);

/// The simplified energy C_d integral v^2 |w'|^2 (w|v'| + v|w'|)^{p-2} r^{d-1},
/// valid for every p in (1, inf). Nodes with w' = 0 contribute 0; the grouped
/// base w|v'| + v|w'| keeps the p < 2 exponent finite wherever v|w'| > 0.
double simplified_energy(const ScalarField& v, const ScalarField& w, Exponent p,
                         Dimension d, const RadialGrid& grid);

/// Split form for p > 2: E1 = C_d integral v^p |w'|^p r^{d-1},
/// E2 = C_d integral v^2 |v'|^{p-2} w^{p-2} |w'|^2 r^{d-1}.
std::pair<double, double> simplified_energy_split(const ScalarField& v, const ScalarField& w,
                                                  Exponent p, Dimension d,
                                                  const RadialGrid& grid);

/// Alternative grouping |w'|^2 (w|v'| v^{2/(p-2)} + v^{p/(p-2)} |w'|)^{p-2}
/// for p != 2; algebraically identical to simplified_energy where v > 0 and
/// kept as a cross-check route only.
double simplified_energy_allp(const ScalarField& v, const ScalarField& w, Exponent p,
                              Dimension d, const RadialGrid& grid);

/// Comparison kernel alpha^2 t^2 (beta s^{1/(p-2)} + alpha t)^{p-2} for
/// p > 2, nondecreasing in s and in t separately.
double monotone_kernel(double s, double t, double alpha, double beta, Exponent p);

enum class EquivalenceMode { two_sided, one_sided };

/// Ratio record of Q(v w_k) against the simplified energy over a cutoff
/// family. In two-sided mode Q is computed by BOTH routes (direct and
/// expanded product form); a disagreement flags a bad solution input. In
/// one-sided mode the simplified energy is restricted to {v > 0} and only an
/// upper ratio bound is meaningful.
struct EquivalenceReport {
  std::string family;
  EquivalenceMode mode;
  std::vector<double> q_direct;
  std::vector<double> q_expanded;   // two-sided mode only
  std::vector<double> simplified;
  std::vector<double> ratios;       // q_direct / simplified
  double inf_ratio = 0.0;
  double sup_ratio = 0.0;
  double max_route_disagreement = 0.0;  // |direct - expanded| / scale
  bool violation = false;               // simplified = 0 with Q != 0
};

EquivalenceReport equivalence_report(const ScalarField& v, const CutoffFamily& family,
                                     const ProblemSpec& spec, EquivalenceMode mode);

/// Grid covering the support of family member k with margin, suitable for
/// the energy integrals above.
RadialGrid support_grid(const CutoffFamily& family, int k, const ProblemSpec& spec,
                        int density = 16);

/// Throws unless u vanishes toward the grid ends (modulo a regular origin
/// carrying no residual energy).
void require_compact_support(const ScalarField& u, const ProblemSpec& spec,
                             const RadialGrid& grid);

} // namespace gslab::energy

#endif
