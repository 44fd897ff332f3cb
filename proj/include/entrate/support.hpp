#pragma once

#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "entrate/algebraic.hpp"
#include "entrate/error.hpp"
#include "entrate/format.hpp"

namespace entrate {

inline constexpr double kDefaultDedupTol = 1e-12;
inline constexpr double kDefaultFixedPointTol = 1e-14;

/// One retained orbit point Gamma_0^m e_j.
struct AtlasPoint {
  int m = 0;
  SimplexPoint point;
  /// c_{j,m} = prod_{i=1..m} <Gamma_0^{m-i} e_j, E_0 sigma>.
  double coeff = 1.0;
  /// Total coefficient mass this point carries in the depth-N series: coeff
  /// plus the c_{j,i} of every later orbit index i <= N that lands on it
  /// numerically (the orbit has reached tau_bar or closed a cycle).
  double weight = 1.0;
  /// The chain was truncated at this point because it reached tau_bar.
  bool at_limit = false;
};

struct SupportAtlas {
  SimplexPoint tau_bar;
  /// chains[j - 1] holds the retained points of Delta_j, in increasing m.
  std::vector<std::vector<AtlasPoint>> chains;
  int N = 0;
  bool finite_support = false;
  double dedup_tol = kDefaultDedupTol;
  /// E_0 is invertible, in which case the orbits are pairwise distinct.
  bool e0_invertible = false;

  const std::vector<AtlasPoint>& chain(int j) const { return chains[static_cast<std::size_t>(j - 1)]; }
  int q() const { return static_cast<int>(chains.size()) + 1; }
};

struct ContractionRates {
  /// max over the computed orbits (and tau_bar) of sum_a eps_a [x]_a.
  double gamma_hat = 0.0;
  /// 1 - (q-1)(p - eps P), defined only when eps_max < p.
  std::optional<double> r;
};

namespace detail {

inline SimplexPoint tau_bar_by_eigen(const SymbolMatrices& sym) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(sym.mat(0).transpose());
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < es.eigenvalues().size(); ++k)
    if (es.eigenvalues()(k).real() > es.eigenvalues()(best).real()) best = k;
  Eigen::VectorXd v = es.eigenvectors().col(best).real().cwiseAbs();
  return SimplexPoint::normalized(v);
}

}  // namespace detail

/// The nontrivial fixed point of Gamma_0. Found by iterating Gamma_0 from the
/// barycentre and cross-checked against the Perron vector of E_0^T.
inline SimplexPoint fixed_point_tau_bar(const SymbolMatrices& sym, double tol = kDefaultFixedPointTol,
                                        long max_iter = 1'000'000) {
  if (!(tol > 0.0)) throw Error(ErrorCode::NoConvergence, "fixed point tolerance must be positive");
  const int q = sym.q();
  SimplexPoint v{Eigen::VectorXd::Constant(q, 1.0 / q)};
  bool converged = false;
  for (long it = 0; it < max_iter; ++it) {
    SimplexPoint next = gamma0(sym, v);
    const double diff = next.l1_distance(v);
    v = std::move(next);
    if (diff <= tol) {
      converged = true;
      break;
    }
  }
  const SimplexPoint eig = detail::tau_bar_by_eigen(sym);
  if (converged) {
    if (v.l1_distance(eig) > 1e-10)
      throw Error(ErrorCode::NoConvergence, "Gamma_0 iteration and Perron vector of E_0^T disagree");
    return v;
  }
  if (gamma0(sym, eig).l1_distance(eig) <= tol) return eig;
  throw Error(ErrorCode::NoConvergence, "Gamma_0 iteration did not reach tolerance " + std::to_string(tol));
}

/// Orbits Gamma_0^m e_j for j = 1..q-1 and m = 0..N, split into disjoint
/// chains Delta_j with the coefficients c_{j,m} attached.
///
/// When E_0 is singular, a point within dedup_tol of a point of an earlier
/// chain is dropped (first chain wins). A chain stops once it reaches tau_bar
/// or revisits one of its own points; the remaining orbit indices up to N are
/// folded into the weights of the points they revisit.
inline SupportAtlas compute_support(const SymbolMatrices& sym, int N, double dedup_tol = kDefaultDedupTol,
                                    std::optional<SimplexPoint> tau_bar = std::nullopt) {
  if (N < 0) throw Error(ErrorCode::ShapeMismatch, "truncation depth must be >= 0");
  const int q = sym.q();
  SupportAtlas atlas;
  atlas.tau_bar = tau_bar ? *tau_bar : fixed_point_tau_bar(sym);
  atlas.N = N;
  atlas.dedup_tol = dedup_tol;
  atlas.e0_invertible = Eigen::FullPivLU<Eigen::MatrixXd>(sym.mat(0)).isInvertible();
  atlas.chains.resize(static_cast<std::size_t>(q - 1));

  for (int j = 1; j < q; ++j) {
    auto& chain = atlas.chains[static_cast<std::size_t>(j - 1)];
    struct OrbitEntry {
      SimplexPoint x;
      double s;      // <x, E_0 sigma>
      int retained;  // index into chain, or -1
    };
    std::vector<OrbitEntry> orbit;

    auto near_earlier_chain = [&](const SimplexPoint& x) {
      for (int i = 1; i < j; ++i)
        for (const auto& pt : atlas.chain(i))
          if (!pt.at_limit && pt.point.l1_distance(x) <= dedup_tol) return true;
      return false;
    };

    SimplexPoint x = sym.row(j);
    double c = 1.0;
    for (int m = 0; m <= N; ++m) {
      const double s = sym.symbol_prob(0, x.w);

      if (x.l1_distance(atlas.tau_bar) <= dedup_tol) {
        AtlasPoint pt{m, x, c, c, true};
        double ci = c;
        for (int i = m + 1; i <= N; ++i) {
          ci *= s;
          pt.weight += ci;
        }
        chain.push_back(std::move(pt));
        atlas.finite_support = true;
        break;
      }

      int cycle_start = -1;
      for (int k = 0; k < static_cast<int>(orbit.size()); ++k) {
        if (orbit[static_cast<std::size_t>(k)].x.l1_distance(x) <= dedup_tol) {
          cycle_start = k;
          break;
        }
      }
      if (cycle_start >= 0) {
        // Orbit indices m..N repeat the cycle orbit[cycle_start..m-1].
        const int period = m - cycle_start;
        double ci = c;
        for (int i = m; i <= N; ++i) {
          const auto& e = orbit[static_cast<std::size_t>(cycle_start + (i - cycle_start) % period)];
          if (e.retained >= 0) chain[static_cast<std::size_t>(e.retained)].weight += ci;
          ci *= e.s;
        }
        atlas.finite_support = true;
        break;
      }

      // With E_0 invertible distinct orbits never meet, so closeness between
      // chains near tau_bar is rounding and must not drop mass.
      int retained = -1;
      if (atlas.e0_invertible || !near_earlier_chain(x)) {
        retained = static_cast<int>(chain.size());
        chain.push_back(AtlasPoint{m, x, c, c, false});
      }
      orbit.push_back(OrbitEntry{x, s, retained});
      c *= s;
      x = gamma0(sym, x);
    }
  }
  return atlas;
}

inline ContractionRates contraction_rates(const SymbolMatrices& sym, const SupportAtlas& atlas) {
  ContractionRates rates;
  rates.gamma_hat = sym.symbol_prob(0, atlas.tau_bar.w);
  for (const auto& chain : atlas.chains)
    for (const auto& pt : chain) rates.gamma_hat = std::max(rates.gamma_hat, sym.symbol_prob(0, pt.point.w));
  if (!(rates.gamma_hat < 1.0))
    throw Error(ErrorCode::GammaNotContractive, "gamma_hat = " + std::to_string(rates.gamma_hat));

  const auto& model = sym.model();
  if (model.eps_max() < model.p())
    rates.r = 1.0 - (model.q() - 1) * (model.p() - model.eps_max() * model.P());
  return rates;
}

/// CSV: j,m,w0..w{q-1},c with a header row and LF endings.
inline void write_atlas_csv(std::ostream& os, const SupportAtlas& atlas) {
  const int q = atlas.q();
  os << "j,m";
  for (int a = 0; a < q; ++a) os << ",w" << a;
  os << ",c\n";
  for (int j = 1; j < q; ++j) {
    for (const auto& pt : atlas.chain(j)) {
      os << j << ',' << pt.m;
      for (int a = 0; a < q; ++a) os << ',' << fmt14(pt.point[a]);
      os << ',' << fmt14(pt.coeff) << '\n';
    }
  }
}

}  // namespace entrate
