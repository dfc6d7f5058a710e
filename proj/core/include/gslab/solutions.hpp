#ifndef GSLAB_SOLUTIONS_HPP
#define GSLAB_SOLUTIONS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gslab/domain.hpp"

namespace gslab::solutions {

/// Hardy constant |(p-d)/p|^p; degenerate (and rejected) at p = d.
double hardy_constant(Exponent p, Dimension d);

enum class SolutionStatus { solution, supersolution, subsolution, ground_state };
const char* to_string(SolutionStatus s);

/// A closed-form field together with the potential it is claimed to
/// solve/sub-/supersolve. The claim is an input label; certification is
/// always re-derived from residuals.
struct NamedFamily {
  std::string name;
  Exponent p;
  Dimension d;
  RadialDomain domain;
  ScalarField field;
  Potential potential;
  std::optional<SolutionStatus> claimed_status;
  std::map<std::string, double> params;

  ProblemSpec spec() const { return ProblemSpec(p, d, domain, potential); }
};

/// Families:
///   constant     v = 1, V = 0 on R^d
///   hardy_phi    r^{(p-d)/p} with the critical Hardy potential (p != d)
///   mp_supersol  (1 + r^{p/(p-1)})^{(p-d)/p}, V = 0, d > p (strict supersolution)
///   psi_alpha    (alpha + r^{p/(p-1)})^{-(d-p)(p-1)/p^2} with its matched
///                potential (d >= 2, 1 < p < d, alpha >= 0); alpha = 0
///                degenerates to hardy_phi
/// params: "alpha" for psi_alpha. Unknown names and out-of-range parameters
/// throw.
NamedFamily make_family(const std::string& name, Exponent p, Dimension d,
                        const std::map<std::string, double>& params = {});

/// Pointwise residual of the radial Euler-Lagrange equation,
///   -|v'|^{p-2} [(p-1) v'' + (d-1)/r v'] + V |v|^{p-2} v,
/// zero for exact solutions. Uses the field's exact second derivative when
/// available, otherwise second differences of the stored derivative.
double radial_residual_strong(const ScalarField& v, const ProblemSpec& spec, double r);

/// Magnitude scale of the residual terms at r (for relative verdicts).
double strong_residual_scale(const ScalarField& v, const ProblemSpec& spec, double r);

/// Weak-form pairing of v against a compactly supported test bump:
///   C_d integral (|v'|^{p-2} v' b' + V |v|^{p-2} v b) r^{d-1} dr.
/// Solutions pair to 0; supersolutions to >= 0; subsolutions to <= 0 for
/// nonnegative bumps.
double weak_residual(const ScalarField& v, const ProblemSpec& spec, const ScalarField& bump);

/// Same pairing with every addend in absolute value (relative scale).
double weak_residual_scale(const ScalarField& v, const ProblemSpec& spec,
                           const ScalarField& bump);

/// Polynomial bump (1 - ((r-c)/h)^2)^3 supported on [c-h, c+h].
ScalarField make_bump(double center, double halfwidth);

/// max(v, 0); derivative is one-sided from the positive side at the
/// interface and 0 where v < 0.
ScalarField positive_part(const ScalarField& v);

enum class ResidualMode { strong, weak };

struct ResidualReport {
  ResidualMode mode;
  std::vector<double> location;  // radius (strong) or bump center (weak)
  std::vector<double> residual;  // raw signed residuals
  std::vector<double> relative;  // residual / local scale
  double max_abs_relative = 0.0;
  double min_relative = 0.0;
  double max_relative = 0.0;
  double tolerance = 0.0;
  /// Strongest status supported by the data at `tolerance`.
  std::optional<SolutionStatus> verdict;
};

struct CertifyOptions {
  int points = 100;        // strong radii / weak bumps
  double lo = 1e-2;
  double hi = 1e2;
  double tolerance = 1e-8;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;  // weak-mode bump placement
};

/// Re-derive the solution status of a field from residuals.
ResidualReport certify(const ScalarField& v, const ProblemSpec& spec, ResidualMode mode,
                       const CertifyOptions& opts = {});

/// Does the certified report support the claimed status? (A solution verdict
/// supports super- and subsolution claims as well.)
bool verdict_matches(const ResidualReport& report, SolutionStatus claimed);

} // namespace gslab::solutions

#endif
