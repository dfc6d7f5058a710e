#ifndef GSLAB_CUTOFF_HPP
#define GSLAB_CUTOFF_HPP

#include <utility>

#include "gslab/domain.hpp"

namespace gslab {

enum class CutoffProfile { log_linear, smooth };

/// Growth law of the ramp length T_k = log R_k across the family index:
///   linear:    R_k = R_growth^k          (T_k grows linearly in k)
///   geometric: R_k = R_growth^{2^{k-1}}  (T_k doubles with k)
/// Borderline energies decay like a power of 1/T_k, so the geometric
/// schedule is what makes a finite family exhibit a decisive decay.
enum class CutoffSchedule { geometric, linear };

/// Indexed family w_k of compactly supported radial cutoffs: w_k = 1 on the
/// plateau [b_k, c_k] = [1/R_k, R_k], log-ramps down to 0 over [a_k, b_k] and
/// [c_k, e_k] with a_k = R_k^{-2}, e_k = R_k^2. On a non-punctured domain
/// reaching the origin the inner ramp is dropped (w_k = 1 on [0, c_k]).
///
/// The normalization window B is a fixed compact interval inside every
/// plateau, so the window integral of w_k^p is k-independent.
class CutoffFamily {
 public:
  CutoffFamily(int K, double R_growth, RadialDomain domain,
               CutoffProfile profile = CutoffProfile::log_linear,
               CutoffSchedule schedule = CutoffSchedule::geometric);

  int size() const { return K_; }
  const RadialDomain& domain() const { return domain_; }
  CutoffProfile profile() const { return profile_; }
  CutoffSchedule schedule() const { return schedule_; }
  double growth() const { return R_growth_; }
  bool inner_ramp() const { return inner_ramp_; }

  /// Plateau half-range R_k; k is 1-based.
  double R(int k) const;
  /// Ramp length in log coordinates, T_k = log R_k.
  double ramp_length(int k) const;
  double inner_zero(int k) const;     // a_k (0 when the inner ramp is dropped)
  double plateau_lo(int k) const;     // b_k
  double plateau_hi(int k) const;     // c_k
  double outer_zero(int k) const;     // e_k

  ScalarField member(int k) const;

  /// Normalization window B, strictly inside the first plateau.
  std::pair<double, double> window() const { return window_; }
  void set_window(std::pair<double, double> B);

 private:
  void check_index(int k) const;

  int K_;
  double R_growth_;
  RadialDomain domain_;
  CutoffProfile profile_;
  CutoffSchedule schedule_;
  bool inner_ramp_;
  std::pair<double, double> window_;
};

/// Standard log-cutoff family construction; K >= 3 so decay trends are
/// well-posed downstream. Requires a punctured or unbounded domain.
CutoffFamily log_cutoff_family(int K, double R_growth, const RadialDomain& domain,
                               CutoffProfile profile = CutoffProfile::log_linear,
                               CutoffSchedule schedule = CutoffSchedule::geometric);

} // namespace gslab

#endif
