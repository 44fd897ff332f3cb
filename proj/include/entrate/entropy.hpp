#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/SVD>

#include "entrate/algebraic.hpp"
#include "entrate/error.hpp"
#include "entrate/log_base.hpp"
#include "entrate/support.hpp"

namespace entrate {

/// Truncated system A_hat Phi = b. Rows 0..q-2 are the balance equations
/// for phi(e_1)..phi(e_{q-1}); the last row is total mass.
struct LinearSystem {
  Eigen::MatrixXd A_hat;  // q x (q-1)
  Eigen::VectorXd b;      // (0, ..., 0, 1)
  int N = 0;
};

struct EntropySolution {
  int q = 0;
  int N = 0;
  LogBase log_base;
  double H_N = 0.0;
  /// Rigorous truncation bound; present iff r exists (eps_max < p).
  std::optional<double> err_bound;
  /// The same bound with gamma_hat in place of r. Diagnostic only.
  double err_estimate_gamma = 0.0;
  double gamma_hat = 0.0;
  std::optional<double> r;
  Eigen::VectorXd phi_hat;
  /// Induced 1-norm (max absolute column sum) of pinv(A_hat).
  double A_dagger_norm = 0.0;
  /// sum_j sum_m c_{j,m} phi_hat_j; 1 for the exact system.
  double total_mass = 0.0;
};

inline LinearSystem assemble_system(const SymbolMatrices& sym, const SupportAtlas& atlas) {
  const int q = sym.q();
  LinearSystem sys;
  sys.N = atlas.N;
  sys.A_hat = Eigen::MatrixXd::Zero(q, q - 1);
  sys.b = Eigen::VectorXd::Zero(q);
  sys.b(q - 1) = 1.0;
  for (int j = 1; j < q; ++j) {
    const int col = j - 1;
    for (const auto& pt : atlas.chain(j)) {
      sys.A_hat(q - 1, col) += pt.weight;
      if (q > 2)
        for (int i = 1; i < q; ++i) sys.A_hat(i - 1, col) += sym.symbol_prob(i, pt.point.w) * pt.weight;
    }
    if (q > 2) sys.A_hat(col, col) -= 1.0;
  }
  return sys;
}

/// Moore-Penrose pseudo-inverse of A_hat; throws RankDeficient when the
/// columns are dependent to within 1e-12 relative conditioning.
inline Eigen::MatrixXd pseudo_inverse(const LinearSystem& sys) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.A_hat, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double smin = sv.size() ? sv(sv.size() - 1) : 0.0;
  if (!(smax > 0.0) || smin <= 1e-12 * smax) throw Error(ErrorCode::RankDeficient, "A_hat lacks full column rank");
  return svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
}

/// Least-squares Phi_hat = pinv(A_hat) b. For q = 2 the system collapses to
/// Phi_1 = 1 / sum_m c_{1,m}.
inline Eigen::VectorXd solve_phi(const LinearSystem& sys) {
  const Eigen::Index q = sys.A_hat.rows();
  if (q == 2) {
    const double total = sys.A_hat(1, 0);
    if (!(total > 0.0)) throw Error(ErrorCode::RankDeficient, "A_hat lacks full column rank");
    return Eigen::VectorXd::Constant(1, 1.0 / total);
  }
  return pseudo_inverse(sys) * sys.b;
}

/// h_a(w) = -x log x with x = <w, E_a sigma>.
inline double symbol_entropy_h(const SymbolMatrices& sym, int a, const SimplexPoint& w, LogBase base) {
  return entropy_term(sym.symbol_prob(a, w.w), base, sym.q());
}

namespace detail {

inline double truncation_bound(int q, double rate, int N, double dagger_norm) {
  const double tail = std::pow(rate, N + 1) / (1.0 - rate);
  return q * tail * (1.0 + q * dagger_norm / (1.0 - rate));
}

}  // namespace detail

/// H_N(mu) = sum_j sum_{m<=N} sum_a h_a(Gamma_0^m e_j) c_{j,m} Phi_hat_j,
/// from a precomputed atlas.
inline EntropySolution entropy_rate(const SymbolMatrices& sym, const SupportAtlas& atlas, LogBase base) {
  const int q = sym.q();
  EntropySolution sol;
  sol.q = q;
  sol.N = atlas.N;
  sol.log_base = base;

  const LinearSystem sys = assemble_system(sym, atlas);
  const Eigen::MatrixXd dagger = pseudo_inverse(sys);
  sol.phi_hat = solve_phi(sys);
  sol.A_dagger_norm = dagger.cwiseAbs().colwise().sum().maxCoeff();

  double H = 0.0;
  double mass = 0.0;
  for (int j = 1; j < q; ++j) {
    const double phi = sol.phi_hat(j - 1);
    for (const auto& pt : atlas.chain(j)) {
      double h = 0.0;
      for (int a = 0; a < q; ++a) h += symbol_entropy_h(sym, a, pt.point, base);
      H += h * pt.weight * phi;
      mass += pt.weight * phi;
    }
  }
  sol.H_N = H;
  sol.total_mass = mass;

  const ContractionRates rates = contraction_rates(sym, atlas);
  sol.gamma_hat = rates.gamma_hat;
  sol.r = rates.r;
  sol.err_estimate_gamma = detail::truncation_bound(q, rates.gamma_hat, atlas.N, sol.A_dagger_norm);
  if (rates.r) sol.err_bound = detail::truncation_bound(q, *rates.r, atlas.N, sol.A_dagger_norm);
  return sol;
}

/// Full pipeline: symbol matrices, tau_bar, atlas at depth N, solve, sum.
inline EntropySolution entropy_rate(const ValidatedModel& model, int N, LogBase base = LogBase::q_ary()) {
  const SymbolMatrices sym(model);
  return entropy_rate(sym, compute_support(sym, N), base);
}

}  // namespace entrate
