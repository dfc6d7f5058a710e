#include "gslab/quad.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace gslab::quad {

namespace {

// Gauss-Kronrod 7-15 pair on [-1, 1] (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  double value, error;
  double resabs;
};

[[noreturn]] void throw_nonfinite(double r, double fr) {
  throw std::runtime_error("integrand not finite at r = " + std::to_string(r) +
                           " (value " + std::to_string(fr) + ")");
}

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  double fv[15];
  auto eval = [&](double x) {
    const double y = f(x);
    if (!std::isfinite(y)) throw_nonfinite(x, y);
    return y;
  };

  double resk = 0.0, resg = 0.0, resabs = 0.0;
  const double fc = eval(c);
  resk += kWgk[7] * fc;
  resg += kWg[3] * fc;
  resabs += kWgk[7] * std::abs(fc);
  fv[7] = fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = eval(c - dx);
    const double f2 = eval(c + dx);
    fv[j] = f1;
    fv[14 - j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }

  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
  resasc *= h;
  resabs *= h;

  Panel p;
  p.a = a;
  p.b = b;
  p.value = resk * h;
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > DBL_MIN / (50.0 * DBL_EPSILON))
    err = std::max(err, 50.0 * DBL_EPSILON * resabs);
  p.error = err;
  p.resabs = resabs;
  return p;
}

// Globally adaptive refinement over an initial panel list.
IntegralResult adaptive(const std::function<double(double)>& f,
                        std::vector<Panel> panels, double rel_tol, double abs_tol,
                        int max_panels) {
  auto worse = [](const Panel& x, const Panel& y) { return x.error < y.error; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> heap(worse, std::move(panels));

  double total = 0.0, err = 0.0;
  {
    std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> copy = heap;
    while (!copy.empty()) {
      total += copy.top().value;
      err += copy.top().error;
      copy.pop();
    }
  }

  int n = static_cast<int>(heap.size());
  while (n < max_panels) {
    if (err <= std::max(abs_tol, rel_tol * std::abs(total))) break;
    Panel top = heap.top();
    if (top.error <= 1e-3 * std::max(abs_tol, rel_tol * std::abs(total)) ||
        top.b - top.a <= 8.0 * DBL_EPSILON * std::max(std::abs(top.a), std::abs(top.b)))
      break;  // cannot usefully refine further
    heap.pop();
    const double mid = 0.5 * (top.a + top.b);
    Panel left = gk15(f, top.a, mid);
    Panel right = gk15(f, mid, top.b);
    total += left.value + right.value - top.value;
    err += left.error + right.error - top.error;
    heap.push(left);
    heap.push(right);
    ++n;
  }

  IntegralResult res;
  res.value = total;
  res.error_estimate = std::max(err, 0.0);
  res.converged = err <= std::max(abs_tol, rel_tol * std::abs(total)) * 1.0001 ||
                  err <= abs_tol * 10.0;
  return res;
}

IntegralResult integrate_finite(const std::function<double(double)>& f, double a,
                                double b, const std::vector<double>& brk,
                                double rel_tol, double abs_tol, int max_panels) {
  std::vector<double> pts{a};
  for (double x : brk)
    if (x > a && x < b) pts.push_back(x);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<Panel> panels;
  panels.reserve(pts.size() - 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    panels.push_back(gk15(f, pts[i], pts[i + 1]));
  return adaptive(f, std::move(panels), rel_tol, abs_tol, max_panels);
}

// integral over s in [s0, inf) of g(s), extending panel by panel until the
// contributions are negligible against the accumulated value.
IntegralResult integrate_extension(const std::function<double(double)>& g, double s0,
                                   double s_cap, double rel_tol, double abs_tol,
                                   int max_panels) {
  const double width = 1.0;
  std::vector<Panel> panels;
  double acc = 0.0;
  int negligible_run = 0;
  double s = s0;
  bool reached_tail = false;
  while (s < s_cap) {
    const double s1 = std::min(s + width, s_cap);
    Panel p = gk15(g, s, s1);
    panels.push_back(p);
    acc += p.value;
    s = s1;
    const double gate = std::max(abs_tol, 0.05 * rel_tol * std::abs(acc));
    if (std::abs(p.value) + p.error <= gate)
      ++negligible_run;
    else
      negligible_run = 0;
    if (negligible_run >= 3) {
      reached_tail = true;
      break;
    }
    if (static_cast<int>(panels.size()) > max_panels / 2) break;
  }
  IntegralResult res = adaptive(g, std::move(panels), rel_tol, abs_tol, max_panels);
  res.converged = res.converged && (reached_tail || s >= s_cap);
  return res;
}

} // namespace

IntegralResult integrate(const std::function<double(double)>& f, double a, double b,
                         const QuadOptions& opts) {
  if (!(a < b)) throw std::invalid_argument("integrate: empty interval");
  if (!std::isfinite(a)) throw std::invalid_argument("integrate: left endpoint must be finite");

  IntegralResult total;
  total.converged = true;
  auto accumulate = [&total](const IntegralResult& part) {
    total.value += part.value;
    total.error_estimate += part.error_estimate;
    total.converged = total.converged && part.converged;
  };

  double lo = a;

  // Singular left endpoint: r = lo + e^{-s}, ds-extension toward the endpoint.
  if (opts.singular_left) {
    const double upper = std::isfinite(b) ? b : std::max(2.0 * lo, 1.0);
    const double w = std::min(1.0, 0.5 * (upper - lo));
    auto g = [&f, lo](double s) {
      const double e = std::exp(-s);
      return f(lo + e) * e;
    };
    accumulate(integrate_extension(g, -std::log(w), 745.0, opts.rel_tol, opts.abs_tol,
                                   opts.max_panels));
    lo += w;
  }

  const bool improper_right = !std::isfinite(b);
  double mid_hi = b;
  if (improper_right) {
    mid_hi = std::max(1.0, 2.0 * lo);
    auto g = [&f](double s) {
      const double r = std::exp(s);
      return f(r) * r;
    };
    accumulate(integrate_extension(g, std::log(mid_hi), 709.0, opts.rel_tol,
                                   opts.abs_tol, opts.max_panels));
  }

  if (mid_hi > lo) {
    // Wide positive spans are handled in log space (graded integrands become
    // polynomially behaved there).
    if (lo > 0.0 && mid_hi / lo > 100.0) {
      auto g = [&f](double s) {
        const double r = std::exp(s);
        return f(r) * r;
      };
      std::vector<double> brk;
      for (double x : opts.breakpoints)
        if (x > lo && x < mid_hi) brk.push_back(std::log(x));
      accumulate(integrate_finite(g, std::log(lo), std::log(mid_hi), brk, opts.rel_tol,
                                  opts.abs_tol, opts.max_panels));
    } else {
      accumulate(integrate_finite(f, lo, mid_hi, opts.breakpoints, opts.rel_tol,
                                  opts.abs_tol, opts.max_panels));
    }
  }
  return total;
}

IntegralResult integrate(const std::function<double(double)>& f, const RadialGrid& grid,
                         const QuadOptions& opts) {
  QuadOptions o = opts;
  for (double x : grid.nodes()) o.breakpoints.push_back(x);
  return integrate(f, grid.lo(), grid.hi(), o);
}

IntegralResult integrate_panels(const std::function<double(double)>& f,
                                const std::vector<double>& breakpoints) {
  if (breakpoints.size() < 2)
    throw std::invalid_argument("integrate_panels: need >= 2 breakpoints");
  IntegralResult res;
  res.converged = true;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i]))
      throw std::invalid_argument("integrate_panels: breakpoints not increasing");
    Panel p = gk15(f, breakpoints[i], breakpoints[i + 1]);
    res.value += p.value;
    res.error_estimate += p.error;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Tail classification

namespace {

struct FitResult {
  double a = 0.0, b = 0.0, c = 0.0;
  double rms = 0.0;
  double r2 = 0.0;
  int n = 0;
};

// Least squares of y ~ c + a*ln(x) + b*ln(ln(x)) over probe pairs.
FitResult fit_bertrand(const std::vector<double>& xs, const std::vector<double>& ys) {
  FitResult fit;
  const std::size_t n = xs.size();
  fit.n = static_cast<int>(n);
  long double S[3][3] = {{0}};
  long double rhs[3] = {0};
  for (std::size_t i = 0; i < n; ++i) {
    const long double b0 = 1.0L;
    const long double b1 = std::log(static_cast<long double>(xs[i]));
    const long double b2 = std::log(b1);
    const long double base[3] = {b0, b1, b2};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) S[r][c] += base[r] * base[c];
      rhs[r] += base[r] * static_cast<long double>(ys[i]);
    }
  }
  // 3x3 Gaussian elimination with partial pivoting.
  int idx[3] = {0, 1, 2};
  long double M[3][4];
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) M[r][c] = S[r][c];
    M[r][3] = rhs[r];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs((double)M[r][col]) > std::abs((double)M[piv][col])) piv = r;
    std::swap(M[col], M[piv]);
    std::swap(idx[col], idx[piv]);
    if (M[col][col] == 0.0L) return fit;  // singular; caller sees rms 0, n small
    for (int r = col + 1; r < 3; ++r) {
      const long double fct = M[r][col] / M[col][col];
      for (int c = col; c < 4; ++c) M[r][c] -= fct * M[col][c];
    }
  }
  long double sol[3];
  for (int r = 2; r >= 0; --r) {
    long double acc = M[r][3];
    for (int c = r + 1; c < 3; ++c) acc -= M[r][c] * sol[c];
    sol[r] = acc / M[r][r];
  }
  fit.c = static_cast<double>(sol[0]);
  fit.a = static_cast<double>(sol[1]);
  fit.b = static_cast<double>(sol[2]);

  long double ss_res = 0.0L, ss_tot = 0.0L, mean = 0.0L;
  for (double y : ys) mean += y;
  mean /= n;
  for (std::size_t i = 0; i < n; ++i) {
    const long double lx = std::log(static_cast<long double>(xs[i]));
    const long double pred = sol[0] + sol[1] * lx + sol[2] * std::log(lx);
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - mean) * (ys[i] - mean);
  }
  fit.rms = std::sqrt(static_cast<double>(ss_res) / n);
  fit.r2 = ss_tot > 0.0L ? static_cast<double>(1.0L - ss_res / ss_tot) : 1.0;
  return fit;
}

// Bertrand criterion at infinity with an explicit indecision band:
// divergent iff a > -1, or a = -1 and b >= -1.
TailVerdict decide(const FitResult& fit, const TailOptions& opts) {
  TailVerdict v;
  v.power_x = fit.a;
  v.power_log = fit.b;
  const double conf_fit = std::max(0.0, std::min(1.0, 1.0 - fit.rms / 0.3));
  if (fit.a > -1.0 + opts.band_a) {
    v.verdict = Convergence::divergent;
    v.confidence = conf_fit * std::min(1.0, (fit.a + 1.0) / 0.2);
  } else if (fit.a < -1.0 - opts.band_a) {
    v.verdict = Convergence::convergent;
    v.confidence = conf_fit * std::min(1.0, -(fit.a + 1.0) / 0.2);
  } else if (fit.b > -1.0 + opts.band_b) {
    v.verdict = Convergence::divergent;
    v.confidence = 0.8 * conf_fit * std::min(1.0, (fit.b + 1.0) / 0.5);
  } else if (fit.b < -1.0 - opts.band_b) {
    v.verdict = Convergence::convergent;
    v.confidence = 0.8 * conf_fit * std::min(1.0, -(fit.b + 1.0) / 0.5);
  } else {
    v.verdict = Convergence::inconclusive;
    v.confidence = 0.0;
    v.note = "fitted exponents inside the Bertrand indecision band";
  }
  return v;
}

std::vector<double> make_probes(double x0, const TailOptions& opts) {
  std::vector<double> xs;
  const double step = std::pow(2.0, 1.0 / std::max(1, opts.per_octave));
  double base = std::max(x0, 2.0);  // the fit model needs log log x
  const int n = opts.max_octaves * std::max(1, opts.per_octave);
  for (int j = 0; j <= n && base <= opts.max_argument; ++j, base *= step) {
    // golden-ratio jitter: geometric probes must not lock onto a periodic
    // structure of the integrand (all powers of two are even integers)
    const double jitter = std::exp2(0.5 * std::fmod(0.6180339887498949 * j, 1.0));
    const double x = base * jitter;
    if (x <= opts.max_argument) xs.push_back(x);
  }
  return xs;
}

TailVerdict partial_sum_probe(const std::function<double(double)>& f, double x0,
                              const TailOptions& opts) {
  TailVerdict v;
  v.from_partial_sums = true;
  std::vector<double> seg;
  double total = 0.0;
  double x = std::max(x0, 1.0);
  QuadOptions qo;
  qo.rel_tol = 1e-8;
  qo.abs_tol = 1e-280;
  const int max_seg = 40;
  for (int m = 0; m < max_seg && 2.0 * x <= opts.max_argument; ++m) {
    IntegralResult part;
    try {
      part = integrate(f, x, 2.0 * x, qo);
    } catch (const std::runtime_error&) {
      // non-finite integrand inside the segment: decisive only if the sums
      // already exploded (a capped evaluation range also lands here)
      if (total > 1e10) {
        v.verdict = Convergence::divergent;
        v.note = "integrand overflow after explosive partial sums";
        v.confidence = 0.9;
        return v;
      }
      break;
    }
    seg.push_back(part.value);
    total += part.value;
    if (total > 1e50 || part.value > 1e50) {
      v.verdict = Convergence::divergent;
      v.note = "partial sums grow without bound";
      v.confidence = 0.95;
      return v;
    }
    x *= 2.0;
  }
  if (seg.size() < 6) {
    v.note = "not enough segments for a partial-sum verdict";
    return v;
  }
  // decisive geometric decay => convergent; sustained growth => divergent
  double qmax = 0.0;
  bool growing = true;
  for (std::size_t i = seg.size() - 3; i < seg.size(); ++i) {
    const double q = seg[i] / std::max(seg[i - 1], DBL_MIN);
    qmax = std::max(qmax, q);
    growing = growing && seg[i] >= 0.999 * seg[i - 1];
  }
  if (qmax < 0.9 && total > 0.0) {
    const double tail = seg.back() * qmax / (1.0 - qmax);
    if (tail <= 0.05 * total) {
      v.verdict = Convergence::convergent;
      v.confidence = 0.9;
      v.note = "partial sums Cauchy-converge";
      return v;
    }
  }
  if (growing) {
    v.verdict = Convergence::divergent;
    v.confidence = 0.7;
    v.note = "segment contributions do not decay";
    return v;
  }
  v.note = "partial-sum growth pattern indecisive";
  return v;
}

TailVerdict classify_core(const std::function<double(double)>& log_f, double x0,
                          const TailOptions& opts,
                          const std::function<double(double)>* raw_f) {
  std::vector<double> xs = make_probes(x0, opts);
  std::vector<double> keep_x, keep_y;
  int bad = 0;
  for (double x : xs) {
    const double y = log_f(x);
    if (!std::isfinite(y)) {
      ++bad;
      continue;
    }
    keep_x.push_back(x);
    keep_y.push_back(y);
  }
  if (keep_x.size() < 12) {
    TailVerdict v;
    v.note = bad ? "non-positive or non-finite integrand at probes" : "too few probes";
    if (raw_f && keep_x.size() >= 1) {
      TailVerdict ps = partial_sum_probe(*raw_f, x0, opts);
      if (ps.verdict != Convergence::inconclusive) return ps;
      ps.note = v.note + "; " + ps.note;
      return ps;
    }
    return v;
  }
  // drop the leading quarter: transients before the tail regime
  const std::size_t skip = keep_x.size() / 4;
  std::vector<double> fx(keep_x.begin() + skip, keep_x.end());
  std::vector<double> fy(keep_y.begin() + skip, keep_y.end());
  FitResult fit = fit_bertrand(fx, fy);

  if (fit.rms > opts.fit_rms_gate && raw_f) {
    TailVerdict ps = partial_sum_probe(*raw_f, x0, opts);
    ps.power_x = fit.a;
    ps.power_log = fit.b;
    if (ps.verdict != Convergence::inconclusive) return ps;
  }
  TailVerdict v = decide(fit, opts);
  if (bad > 0) v.note += (v.note.empty() ? "" : "; ") + std::string("some probes skipped");
  return v;
}

} // namespace

TailVerdict classify_tail(const std::function<double(double)>& f, double x0,
                          TailDirection dir, const TailOptions& opts) {
  if (dir == TailDirection::toward_zero) {
    // u = 1/x maps the zero tail onto an infinity tail of f(1/u)/u^2.
    auto g = [&f](double u) { return f(1.0 / u) / (u * u); };
    TailOptions o = opts;
    TailVerdict v = classify_tail(g, std::max(2.0, 1.0 / x0), TailDirection::toward_infinity, o);
    const double a_g = v.power_x;
    v.power_x = -a_g - 2.0;  // f ~ x^a |log x|^b at 0  <=>  g ~ u^{-a-2} (log u)^b
    return v;
  }

  // The classifier is for positive integrands: a non-positive probe is a
  // contract violation, reported as inconclusive with the offending radius.
  bool nonpositive = false;
  double bad_at = 0.0;
  auto log_f = [&](double x) {
    const double y = f(x);
    if (y <= 0.0) {
      if (!nonpositive) bad_at = x;
      nonpositive = true;
      return std::nan("");
    }
    return std::log(y);
  };
  for (double x : make_probes(x0, opts)) {
    (void)log_f(x);
    if (nonpositive) {
      TailVerdict v;
      v.note = "non-positive integrand at probe x = " + std::to_string(bad_at);
      return v;
    }
  }
  return classify_core(log_f, x0, opts, &f);
}

TailVerdict classify_tail_log(const std::function<double(double)>& log_f, double x0,
                              TailDirection dir, const TailOptions& opts) {
  if (dir == TailDirection::toward_zero)
    throw std::invalid_argument(
        "classify_tail_log: zero-direction tails must be mapped by the caller");
  return classify_core(log_f, x0, opts, nullptr);
}

} // namespace gslab::quad
