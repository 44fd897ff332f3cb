#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entrate/error.hpp"
#include "entrate/model.hpp"

namespace entrate {

/// A probability vector on q symbols (a belief state).
struct SimplexPoint {
  Eigen::VectorXd w;

  /// Rescale a nonnegative vector onto the simplex.
  static SimplexPoint normalized(const Eigen::VectorXd& v) { return SimplexPoint{v / v.sum()}; }

  int size() const { return static_cast<int>(w.size()); }
  double operator[](int a) const { return w(a); }

  bool on_simplex(double tol = 1e-12) const { return w.minCoeff() >= 0.0 && std::abs(w.sum() - 1.0) <= tol; }

  double l1_distance(const SimplexPoint& other) const { return (w - other.w).lpNorm<1>(); }
};

/// The manifestly positive representation of the output process:
///   E_0 = F_0 + sum_{a>=1} eps_a F_a,   E_a = (1 - eps_a) F_a,
/// where F_a keeps only row a of E. sigma (all ones) is never stored;
/// <x, E_a sigma> is x . mass(a).
class SymbolMatrices {
 public:
  explicit SymbolMatrices(const ValidatedModel& model) : model_(model) {
    const int q = model.q();
    const auto& E = model.transition().matrix();
    mats_.assign(q, Eigen::MatrixXd::Zero(q, q));
    for (int a = 0; a < q; ++a) {
      const double eps = model.noise().eps(a);
      rows_.push_back(E.row(a).transpose());
      eps_.push_back(eps);
      if (a == 0) {
        mats_[0].row(0) = E.row(0);
      } else {
        mats_[a].row(a) = (1.0 - eps) * E.row(a);
        mats_[0].row(a) = eps * E.row(a);
      }
    }
    for (const auto& m : mats_) mass_.push_back(m.rowwise().sum());
  }

  int q() const { return model_.q(); }
  const ValidatedModel& model() const { return model_; }
  const Eigen::MatrixXd& mat(int a) const { return mats_[static_cast<std::size_t>(a)]; }
  const std::vector<Eigen::MatrixXd>& mats() const { return mats_; }
  /// e_a, the a-th row of E as a simplex point.
  SimplexPoint row(int a) const { return SimplexPoint{rows_[static_cast<std::size_t>(a)]}; }
  /// E_a sigma, the row sums of E_a.
  const Eigen::VectorXd& mass(int a) const { return mass_[static_cast<std::size_t>(a)]; }
  /// eps_a with eps_0 = 1.
  double eps(int a) const { return eps_[static_cast<std::size_t>(a)]; }

  /// <nu, E_a sigma>: probability that the next output is a given belief nu.
  double symbol_prob(int a, const Eigen::VectorXd& nu) const { return nu.dot(mass(a)); }

 private:
  ValidatedModel model_;
  std::vector<Eigen::MatrixXd> mats_;
  std::vector<Eigen::VectorXd> rows_;
  std::vector<Eigen::VectorXd> mass_;
  std::vector<double> eps_;
};

inline SymbolMatrices build_symbol_matrices(const ValidatedModel& model) { return SymbolMatrices(model); }

struct StationaryDistribution {
  SimplexPoint tau;
};

inline constexpr double kStationaryResidualTol = 1e-12;

/// Left Perron vector of E by power iteration from the uniform vector.
inline StationaryDistribution stationary_distribution(const TransitionMatrix& transition,
                                                      long max_iter = 1'000'000) {
  const int q = transition.q();
  const Eigen::MatrixXd Et = transition.matrix().transpose();
  Eigen::VectorXd v = Eigen::VectorXd::Constant(q, 1.0 / q);
  for (long it = 0; it < max_iter; ++it) {
    Eigen::VectorXd next = Et * v;
    next /= next.lpNorm<1>();
    const double diff = (next - v).lpNorm<1>();
    v = std::move(next);
    if (diff <= 1e-14) break;
  }
  const double residual = (Et * v - v).lpNorm<1>();
  if (!(residual <= kStationaryResidualTol))
    throw Error(ErrorCode::NoConvergence, "stationary distribution residual " + std::to_string(residual));
  return {SimplexPoint{v}};
}

/// mu(w) = <tau, E_{w_1} ... E_{w_n} sigma>, evaluated left to right as
/// vector-matrix products.
inline double word_measure(const SymbolMatrices& sym, const StationaryDistribution& tau, std::span<const int> word) {
  if (word.empty()) throw Error(ErrorCode::SymbolOutOfRange, "empty word");
  Eigen::VectorXd v = tau.tau.w;
  for (int a : word) {
    if (a < 0 || a >= sym.q())
      throw Error(ErrorCode::SymbolOutOfRange, "symbol " + std::to_string(a) + " not in [0, " +
                                                   std::to_string(sym.q() - 1) + "]");
    v = sym.mat(a).transpose() * v;
  }
  return v.sum();
}

inline double word_measure(const SymbolMatrices& sym, const StationaryDistribution& tau,
                           std::initializer_list<int> word) {
  return word_measure(sym, tau, std::span<const int>(word.begin(), word.size()));
}

/// Gamma_a(nu) = E_a^T nu / <nu, E_a sigma>. std::nullopt stands for the
/// zero element returned when symbol a has probability zero under nu.
inline std::optional<SimplexPoint> gamma_map(const SymbolMatrices& sym, int a, const SimplexPoint& nu) {
  if (a < 0 || a >= sym.q())
    throw Error(ErrorCode::SymbolOutOfRange, "symbol " + std::to_string(a) + " out of range");
  const double norm = sym.symbol_prob(a, nu.w);
  if (norm == 0.0) return std::nullopt;
  return SimplexPoint{sym.mat(a).transpose() * nu.w / norm};
}

/// Gamma_0, which never vanishes on the simplex.
inline SimplexPoint gamma0(const SymbolMatrices& sym, const SimplexPoint& nu) {
  const Eigen::VectorXd v = sym.mat(0).transpose() * nu.w;
  return SimplexPoint{v / sym.symbol_prob(0, nu.w)};
}

}  // namespace entrate
