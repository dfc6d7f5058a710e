#include "gslab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gslab {

Exponent::Exponent(double p) : p_(p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw std::invalid_argument("Exponent: p must be finite and > 1, got " +
                                std::to_string(p));
}

Dimension::Dimension(int d) : d_(d) {
  if (d < 1) throw std::invalid_argument("Dimension: d must be >= 1");
}

double sphere_constant(Dimension dim) {
  const double d = dim.d();
  // d * pi^{d/2} / Gamma(d/2 + 1); tgamma is Lanczos-grade (< 1e-14 relative
  // for these arguments), well inside the 1e-12 budget.
  const double pi = 3.14159265358979323846264338327950288;
  return d * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

RadialDomain::RadialDomain(double lo, double hi, bool punct)
    : r_min(lo), r_max(hi), punctured(punct) {
  if (!(r_min >= 0.0)) throw std::invalid_argument("RadialDomain: r_min < 0");
  if (!(r_min < r_max)) throw std::invalid_argument("RadialDomain: r_min >= r_max");
  if (punctured && r_min != 0.0)
    throw std::invalid_argument("RadialDomain: punctured requires r_min = 0");
}

RadialDomain RadialDomain::punctured_ray() { return RadialDomain(0.0, std::numeric_limits<double>::infinity(), true); }
RadialDomain RadialDomain::full_space() { return RadialDomain(0.0, std::numeric_limits<double>::infinity(), false); }
RadialDomain RadialDomain::exterior(double r0) { return RadialDomain(r0, std::numeric_limits<double>::infinity(), false); }

RadialGrid::RadialGrid(std::vector<double> nodes, int density, bool log_spaced)
    : nodes_(std::move(nodes)), density_(density), log_spaced_(log_spaced) {
  if (nodes_.size() < 2) throw std::invalid_argument("RadialGrid: need >= 2 nodes");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1]))
      throw std::invalid_argument("RadialGrid: nodes not strictly increasing");
}

RadialGrid make_grid(const RadialDomain& domain, int density, double lo, double hi) {
  if (density < 2) throw std::invalid_argument("make_grid: density must be >= 2");
  if (!(lo < hi)) throw std::invalid_argument("make_grid: empty interval [lo, hi]");
  if (!(lo >= domain.r_min) || !(hi <= domain.r_max))
    throw std::invalid_argument("make_grid: bounds outside domain");
  if ((domain.punctured || lo == domain.r_min) && lo == 0.0)
    throw std::invalid_argument("make_grid: compact bounds must exclude a singular endpoint");

  const bool log_spaced = domain.punctured || domain.unbounded();
  std::vector<double> nodes;
  if (log_spaced) {
    // hi/lo overflows past ~308 decades; subtract logs instead
    const double decades = std::log10(hi) - std::log10(lo);
    const int n = std::max(2, static_cast<int>(std::ceil(density * decades)) + 1);
    const double step = (std::log(hi) - std::log(lo)) / (n - 1);
    nodes.reserve(n);
    for (int i = 0; i < n; ++i) nodes.push_back(std::exp(std::log(lo) + i * step));
  } else {
    const double decades = std::max(1.0, std::log10(hi / std::max(lo, hi * 1e-12)));
    const int n = std::max(2, static_cast<int>(std::ceil(density * decades)) + 1);
    const double step = (hi - lo) / (n - 1);
    nodes.reserve(n);
    for (int i = 0; i < n; ++i) nodes.push_back(lo + i * step);
  }
  nodes.front() = lo;
  nodes.back() = hi;
  return RadialGrid(std::move(nodes), density, log_spaced);
}

// ---------------------------------------------------------------------------
// ScalarField

namespace {

// Fritsch-Carlson monotone cubic slopes for tabulated data.
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> h(n - 1), delta(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  if (n == 2) {
    m[0] = m[1] = delta[0];
    return m;
  }
  m[0] = delta[0];
  m[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  return m;
}

struct HermiteTable {
  std::vector<double> x, y, m;  // nodes, values, slopes

  double eval(double xi, double* deriv) const {
    auto it = std::upper_bound(x.begin(), x.end(), xi);
    std::size_t i = (it == x.begin()) ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
    if (i + 1 >= x.size()) i = x.size() - 2;
    const double h = x[i + 1] - x[i];
    const double s = (xi - x[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    if (deriv) {
      const double d00 = (6 * s2 - 6 * s) / h, d10 = (3 * s2 - 4 * s + 1) / h;
      const double d01 = (-6 * s2 + 6 * s) / h, d11 = (3 * s2 - 2 * s) / h;
      *deriv = d00 * y[i] + d10 * h * m[i] + d01 * y[i + 1] + d11 * h * m[i + 1];
    }
    return h00 * y[i] + h10 * h * m[i] + h01 * y[i + 1] + h11 * h * m[i + 1];
  }
};

} // namespace

struct ScalarField::Impl {
  // closed form
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  std::function<double(double)> deriv2;  // optional
  std::optional<LogForm> log_form;

  // sampled
  bool is_sampled = false;
  HermiteTable values;
  HermiteTable derivs;     // interpolated tabulated derivatives
  bool has_deriv_samples = false;
};

ScalarField::ScalarField(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

ScalarField ScalarField::closed_form(std::string name,
                                     std::function<double(double)> value,
                                     std::function<double(double)> derivative,
                                     bool positive) {
  auto impl = std::make_shared<Impl>();
  impl->value = std::move(value);
  impl->deriv = std::move(derivative);
  ScalarField f(impl);
  f.name_ = std::move(name);
  f.positive_ = positive;
  return f;
}

ScalarField ScalarField::sampled(std::string name, std::vector<double> r,
                                 std::vector<double> v, std::vector<double> dv,
                                 bool positive) {
  if (r.size() < 2 || r.size() != v.size())
    throw std::invalid_argument("ScalarField::sampled: need matching r/v with >= 2 samples");
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r[i] > r[i - 1]))
      throw std::invalid_argument("ScalarField::sampled: r not strictly increasing");

  auto impl = std::make_shared<Impl>();
  impl->is_sampled = true;
  impl->values.x = r;
  impl->values.y = v;
  impl->values.m = pchip_slopes(r, v);

  if (!dv.empty()) {
    if (dv.size() != r.size())
      throw std::invalid_argument("ScalarField::sampled: dv size mismatch");
    // Stored derivatives must be consistent with the values: compare against
    // centered differences, with an absolute floor from the global slope
    // scale so sign changes of dv are not over-penalized.
    double slope_scale = 0.0;
    for (std::size_t i = 1; i + 1 < r.size(); ++i)
      slope_scale = std::max(
          slope_scale, std::abs((v[i + 1] - v[i - 1]) / (r[i + 1] - r[i - 1])));
    for (std::size_t i = 1; i + 1 < r.size(); ++i) {
      const double cd = (v[i + 1] - v[i - 1]) / (r[i + 1] - r[i - 1]);
      const double tol = 0.3 * (std::abs(cd) + std::abs(dv[i])) + 0.1 * slope_scale + 1e-30;
      if (std::abs(dv[i] - cd) > tol)
        throw std::invalid_argument(
            "ScalarField::sampled: stored derivative inconsistent with values near r = " +
            std::to_string(r[i]));
    }
    impl->has_deriv_samples = true;
    impl->derivs.x = r;
    impl->derivs.y = dv;
    impl->derivs.m = pchip_slopes(r, dv);
  }

  ScalarField f(impl);
  f.name_ = std::move(name);
  f.positive_ = positive;
  return f;
}

double ScalarField::value(double r) const {
  double v;
  if (impl_->is_sampled)
    v = impl_->values.eval(r, nullptr);
  else
    v = impl_->value(r);
  if (positive_ && !(v > 0.0))
    throw std::domain_error("ScalarField '" + name_ + "': positivity violated at r = " +
                            std::to_string(r));
  return v;
}

double ScalarField::derivative(double r) const {
  if (impl_->is_sampled) {
    if (impl_->has_deriv_samples) return impl_->derivs.eval(r, nullptr);
    double d;
    impl_->values.eval(r, &d);  // fallback: differentiate the interpolant
    return d;
  }
  return impl_->deriv(r);
}

std::optional<double> ScalarField::second_derivative(double r) const {
  if (impl_->deriv2) return impl_->deriv2(r);
  return std::nullopt;
}

bool ScalarField::has_log_form() const { return impl_->log_form.has_value(); }

double ScalarField::log_value_at(double log_r) const {
  if (!impl_->log_form) throw std::logic_error("ScalarField: no log form");
  const auto& tail = impl_->log_form->at_infinity;
  return tail.slope * log_r + tail.correction(log_r);
}

double ScalarField::dlog_dlogr_at(double log_r) const {
  if (!impl_->log_form) throw std::logic_error("ScalarField: no log form");
  return impl_->log_form->dlog_dlogr(log_r);
}

const LogAsymptote& ScalarField::log_tail_infinity() const {
  if (!impl_->log_form) throw std::logic_error("ScalarField: no log form");
  return impl_->log_form->at_infinity;
}

bool ScalarField::has_log_tail_zero() const {
  return impl_->log_form && impl_->log_form->at_zero.has_value();
}

const LogAsymptote& ScalarField::log_tail_zero() const {
  if (!has_log_tail_zero()) throw std::logic_error("ScalarField: no zero-side log tail");
  return *impl_->log_form->at_zero;
}

ScalarField ScalarField::with_second_derivative(std::function<double(double)> d2) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->deriv2 = std::move(d2);
  ScalarField f(impl);
  f.name_ = name_;
  f.positive_ = positive_;
  f.knots_ = knots_;
  return f;
}

ScalarField ScalarField::with_log_form(LogForm lf) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->log_form = std::move(lf);
  ScalarField f(impl);
  f.name_ = name_;
  f.positive_ = positive_;
  f.knots_ = knots_;
  return f;
}

ScalarField ScalarField::with_knots(std::vector<double> knots) const {
  ScalarField f(impl_);
  f.name_ = name_;
  f.positive_ = positive_;
  std::sort(knots.begin(), knots.end());
  f.knots_ = std::move(knots);
  return f;
}

namespace {
std::vector<double> merge_knots(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}
} // namespace

ScalarField product(const ScalarField& a, const ScalarField& b) {
  auto f = ScalarField::closed_form(
      a.name() + "*" + b.name(),
      [a, b](double r) { return a.value(r) * b.value(r); },
      [a, b](double r) {
        return a.derivative(r) * b.value(r) + a.value(r) * b.derivative(r);
      },
      a.positive() && b.positive());
  return f.with_knots(merge_knots(a.knots(), b.knots()));
}

ScalarField quotient(const ScalarField& num, const ScalarField& den) {
  auto f = ScalarField::closed_form(
      num.name() + "/" + den.name(),
      [num, den](double r) { return num.value(r) / den.value(r); },
      [num, den](double r) {
        const double d = den.value(r);
        return (num.derivative(r) * d - num.value(r) * den.derivative(r)) / (d * d);
      },
      num.positive() && den.positive());
  return f.with_knots(merge_knots(num.knots(), den.knots()));
}

ScalarField power(const ScalarField& base, double q) {
  if (q < 1.0)
    throw std::invalid_argument("power(ScalarField): exponent must be >= 1");
  auto f = ScalarField::closed_form(
      base.name() + "^" + std::to_string(q),
      [base, q](double r) { return std::pow(base.value(r), q); },
      [base, q](double r) {
        const double v = base.value(r);
        if (v == 0.0) return 0.0;  // q > 1: one-sided derivative from the support
        return q * std::pow(v, q - 1.0) * base.derivative(r);
      },
      base.positive());
  return f.with_knots(base.knots());
}

Potential::Potential(std::string name, std::function<double(double)> value,
                     double singular_power, std::function<double(double)> regular_part,
                     std::optional<double> grouping_power)
    : name_(std::move(name)),
      value_(std::move(value)),
      regular_(std::move(regular_part)),
      singular_power_(singular_power),
      // folding requires the caller-supplied regular part; without one the
      // quadrature consumes V directly
      grouping_power_(regular_ ? grouping_power.value_or(singular_power) : 0.0) {
  if (singular_power < 0.0)
    throw std::invalid_argument("Potential: singular_power must be >= 0");
  if (grouping_power && *grouping_power != 0.0 && !regular_)
    throw std::invalid_argument(
        "Potential: a nonzero grouping power requires an explicit regular part");
}

double Potential::regular_value(double r) const {
  if (regular_) return regular_(r);
  return value_(r);
}

Potential Potential::zero() {
  return Potential("zero", [](double) { return 0.0; }, 0.0);
}

ProblemSpec::ProblemSpec(Exponent p, Dimension d, RadialDomain dom, Potential V)
    : exponent(p), dimension(d), domain(dom), potential(std::move(V)) {
  if (potential.singular_power() > 0.0 && !domain.punctured && domain.r_min == 0.0)
    throw std::invalid_argument(
        "ProblemSpec: singular potential requires a punctured domain or r_min > 0");
}

} // namespace gslab
