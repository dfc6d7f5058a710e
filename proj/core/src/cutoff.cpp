#include "gslab/cutoff.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gslab {

CutoffFamily::CutoffFamily(int K, double R_growth, RadialDomain domain,
                           CutoffProfile profile, CutoffSchedule schedule)
    : K_(K), R_growth_(R_growth), domain_(domain), profile_(profile), schedule_(schedule) {
  if (K < 1) throw std::invalid_argument("CutoffFamily: K must be >= 1");
  if (!(R_growth > 1.0)) throw std::invalid_argument("CutoffFamily: R_growth must be > 1");
  if (!domain.punctured && !domain.unbounded())
    throw std::invalid_argument("CutoffFamily: domain must be punctured or unbounded");

  inner_ramp_ = domain.punctured || domain.r_min > 0.0;

  // Outer support e_K = R_K^2 (and a_K = R_K^{-2}) must stay inside double
  // range; the geometric schedule reaches it quickly.
  const double log_RK = ramp_length(K_);
  if (2.0 * log_RK > 700.0)
    throw std::invalid_argument(
        "CutoffFamily: supports exceed representable range (log R_K = " +
        std::to_string(log_RK) + "); reduce K or R_growth, or use the linear schedule");
  if (inner_ramp_ && domain_.r_min > 0.0 && inner_zero(K_) <= domain_.r_min)
    throw std::invalid_argument("CutoffFamily: inner support leaves the domain");

  // B sits strictly inside the first (hence every) plateau.
  const double R1 = R(1);
  if (inner_ramp_)
    window_ = {std::pow(R1, -0.9), std::pow(R1, 0.9)};
  else
    window_ = {0.1 * R1, 0.9 * R1};
}

void CutoffFamily::check_index(int k) const {
  if (k < 1 || k > K_) throw std::out_of_range("CutoffFamily: index out of range");
}

double CutoffFamily::ramp_length(int k) const {
  check_index(k);
  if (schedule_ == CutoffSchedule::linear) return k * std::log(R_growth_);
  return std::ldexp(std::log(R_growth_), k - 1);  // doubling ramp lengths
}

double CutoffFamily::R(int k) const { return std::exp(ramp_length(k)); }
double CutoffFamily::inner_zero(int k) const {
  return inner_ramp_ ? std::exp(-2.0 * ramp_length(k)) : 0.0;
}
double CutoffFamily::plateau_lo(int k) const {
  return inner_ramp_ ? std::exp(-ramp_length(k)) : 0.0;
}
double CutoffFamily::plateau_hi(int k) const { return std::exp(ramp_length(k)); }
double CutoffFamily::outer_zero(int k) const { return std::exp(2.0 * ramp_length(k)); }

void CutoffFamily::set_window(std::pair<double, double> B) {
  if (!(B.first < B.second) || B.first < plateau_lo(1) || B.second > plateau_hi(1))
    throw std::invalid_argument("CutoffFamily: window must sit inside the first plateau");
  window_ = B;
}

ScalarField CutoffFamily::member(int k) const {
  check_index(k);
  const double T = ramp_length(k);
  const double a = inner_zero(k), b = plateau_lo(k);
  const double c = plateau_hi(k), e = outer_zero(k);
  const bool inner = inner_ramp_;
  const bool smooth = profile_ == CutoffProfile::smooth;

  auto ramp = [smooth](double s) { return smooth ? s * s * (3.0 - 2.0 * s) : s; };
  auto dramp = [smooth](double s) { return smooth ? 6.0 * s * (1.0 - s) : 1.0; };

  auto value = [=](double r) {
    if (r >= e || (inner && r <= a)) return 0.0;
    if (inner && r < b) return ramp(std::log(r / a) / T);
    if (r > c) return ramp(std::log(e / r) / T);
    return 1.0;
  };
  auto deriv = [=](double r) {
    if (r >= e || (inner && r <= a)) return 0.0;
    if (inner && r < b) return dramp(std::log(r / a) / T) / (r * T);
    if (r > c) return -dramp(std::log(e / r) / T) / (r * T);
    return 0.0;
  };

  auto w = ScalarField::closed_form("w_" + std::to_string(k), value, deriv);
  std::vector<double> knots = inner ? std::vector<double>{a, b, c, e}
                                    : std::vector<double>{c, e};
  return w.with_knots(std::move(knots));
}

CutoffFamily log_cutoff_family(int K, double R_growth, const RadialDomain& domain,
                               CutoffProfile profile, CutoffSchedule schedule) {
  if (K < 3) throw std::invalid_argument("log_cutoff_family: K must be >= 3");
  return CutoffFamily(K, R_growth, domain, profile, schedule);
}

} // namespace gslab
