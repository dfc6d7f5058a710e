#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "gslab/nullseq.hpp"

namespace gslab::nullseq {

namespace {

constexpr double kMaxRadius = 131072.0;  // 2^17; table coverage of the field

// 7-point Gauss-Legendre on [-1, 1] for the narrow blend pieces.
constexpr double kGx[7] = {-0.949107912342758524526189684047851,
                           -0.741531185599394439863864773280788,
                           -0.405845151377397166906606412076961,
                           0.0,
                           0.405845151377397166906606412076961,
                           0.741531185599394439863864773280788,
                           0.949107912342758524526189684047851};
constexpr double kGw[7] = {0.129484966168869693270611432679082,
                           0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975,
                           0.417959183673469387755102040816327,
                           0.381830050505118944950369775488975,
                           0.279705391489276667901467771423780,
                           0.129484966168869693270611432679082};

enum class PieceKind { power, exp_small, blend };

struct Piece {
  double lo, hi;
  PieceKind kind;
  PieceKind blend_from = PieceKind::power;  // blends interpolate neighbor laws
  PieceKind blend_to = PieceKind::power;
  double cum = 0.0;  // integral of |psi'| over (1, lo)
};

double smoothstep(double s, BlendKind kind) {
  if (kind == BlendKind::cubic) return s * s * (3.0 - 2.0 * s);
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));  // quintic, C^2 ends
}

struct Table {
  double beta;
  BlendKind blend;
  std::vector<Piece> pieces;
  double total = 0.0;       // integral of |psi'| over (1, table end)
  double tail_beyond = 0.0; // calibrated remainder past the table end (beta < 0)

  double law(PieceKind k, double r) const {
    if (k == PieceKind::power) return std::abs(beta) * std::pow(r, beta - 1.0);
    return std::exp(-r);
  }

  double g(const Piece& pc, double r) const {
    if (pc.kind != PieceKind::blend) return law(pc.kind, r);
    const double s = smoothstep((r - pc.lo) / (pc.hi - pc.lo), blend);
    // clamp the log laws: exp(-r) underflows along the tail and 0 * (-inf)
    // must not poison the mix at the blend ends
    const double la = std::max(std::log(law(pc.blend_from, r)), -745.0);
    const double lb = std::max(std::log(law(pc.blend_to, r)), -745.0);
    return std::exp((1.0 - s) * la + s * lb);
  }

  double piece_integral(const Piece& pc) const {
    switch (pc.kind) {
      case PieceKind::power:
        return std::abs(std::pow(pc.hi, beta) - std::pow(pc.lo, beta));
      case PieceKind::exp_small:
        return std::exp(-pc.lo) - std::exp(-pc.hi);
      case PieceKind::blend: {
        const double c = 0.5 * (pc.lo + pc.hi), h = 0.5 * (pc.hi - pc.lo);
        double acc = 0.0;
        for (int i = 0; i < 7; ++i) acc += kGw[i] * g(pc, c + h * kGx[i]);
        return acc * h;
      }
    }
    return 0.0;
  }

  const Piece& locate(double r) const {
    auto it = std::upper_bound(pieces.begin(), pieces.end(), r,
                               [](double x, const Piece& p) { return x < p.lo; });
    if (it == pieces.begin()) return pieces.front();
    return *(it - 1);
  }

  // integral of |psi'| over (1, r)
  double cum_to(double r) const {
    const Piece& pc = locate(r);
    double acc = pc.cum;
    if (pc.kind == PieceKind::blend) {
      const double c = 0.5 * (pc.lo + r), h = 0.5 * (r - pc.lo);
      for (int i = 0; i < 7; ++i) acc += kGw[i] * g(pc, c + h * kGx[i]) * h;
      return acc;
    }
    if (pc.kind == PieceKind::power)
      return acc + std::abs(std::pow(r, beta) - std::pow(pc.lo, beta));
    return acc + std::exp(-pc.lo) - std::exp(-r);
  }
};

std::shared_ptr<Table> build_table(double beta, BlendKind blend) {
  auto tab = std::make_shared<Table>();
  tab->beta = beta;
  tab->blend = blend;

  // [1,2] power, then per block n >= 1:
  // [2n, 2n+1/4] blend P->E, [2n+1/4, 2n+3/4] exp, [2n+3/4, 2n+1] blend E->P,
  // [2n+1, 2n+2] power.
  auto& ps = tab->pieces;
  ps.push_back({1.0, 2.0, PieceKind::power});
  for (long n = 1; 2.0 * n + 2.0 <= kMaxRadius + 2.0; ++n) {
    const double b0 = 2.0 * n;
    ps.push_back({b0, b0 + 0.25, PieceKind::blend, PieceKind::power, PieceKind::exp_small});
    ps.push_back({b0 + 0.25, b0 + 0.75, PieceKind::exp_small});
    ps.push_back({b0 + 0.75, b0 + 1.0, PieceKind::blend, PieceKind::exp_small,
                  PieceKind::power});
    ps.push_back({b0 + 1.0, b0 + 2.0, PieceKind::power});
    if (b0 + 2.0 > kMaxRadius) break;
  }

  double acc = 0.0;
  for (auto& pc : ps) {
    pc.cum = acc;
    acc += tab->piece_integral(pc);
  }
  tab->total = acc;

  if (beta < 0.0) {
    // Remainder past the table end, calibrated from the last six octaves:
    // psi ~ c r^beta there, so integral(R..end) = c_eff (R^beta - end^beta).
    const double end = ps.back().hi;
    const double R = end / 64.0;
    const double seg = acc - tab->cum_to(R);
    const double denom = std::pow(R, beta) - std::pow(end, beta);
    tab->tail_beyond = seg / denom * std::pow(end, beta);
  }
  return tab;
}

} // namespace

double oscillatory_psi_max_radius() { return kMaxRadius; }

ScalarField make_oscillatory_psi(double beta, BlendKind blend) {
  if (beta == 0.0 || !std::isfinite(beta))
    throw std::invalid_argument("make_oscillatory_psi: beta must be finite and nonzero");

  auto tab = build_table(beta, blend);
  const double nan = std::nan("");

  auto val = [tab, beta, nan](double r) {
    if (!(r > 1.0)) throw std::domain_error("oscillatory_psi: defined on (1, inf)");
    if (r > kMaxRadius) return nan;  // past table coverage
    if (beta > 0.0) return 1.0 + tab->cum_to(r);
    return (tab->total - tab->cum_to(r)) + tab->tail_beyond;
  };
  auto der = [tab, beta, nan](double r) {
    if (!(r > 1.0)) throw std::domain_error("oscillatory_psi: defined on (1, inf)");
    if (r > kMaxRadius) return nan;
    const double g = tab->g(tab->locate(r), r);
    return beta > 0.0 ? g : -g;
  };

  // knots at the first few piece boundaries (quadrature rarely reaches deeper)
  std::vector<double> knots;
  for (std::size_t i = 0; i < tab->pieces.size() && knots.size() < 64; ++i)
    knots.push_back(tab->pieces[i].lo);

  return ScalarField::closed_form(
             beta > 0.0 ? "oscillatory_psi+" : "oscillatory_psi", val, der, false)
      .with_knots(std::move(knots));
}

} // namespace gslab::nullseq
