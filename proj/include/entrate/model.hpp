#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entrate/error.hpp"

namespace entrate {

inline constexpr double kRowSumTol = 1e-12;

/// Row-stochastic q x q matrix with every entry strictly inside (0, 1).
/// entry(i, j) = P(next = j | current = i).
class TransitionMatrix {
 public:
  static TransitionMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t q = rows.size();
    if (q < 2) throw Error(ErrorCode::ShapeMismatch, "need at least 2 symbols, got " + std::to_string(q));
    Eigen::MatrixXd m(q, q);
    for (std::size_t i = 0; i < q; ++i) {
      if (rows[i].size() != q)
        throw Error(ErrorCode::ShapeMismatch, "row " + std::to_string(i) + " has " +
                                                  std::to_string(rows[i].size()) + " entries, expected " +
                                                  std::to_string(q));
      for (std::size_t j = 0; j < q; ++j) m(i, j) = rows[i][j];
    }
    return from_matrix(m);
  }

  static TransitionMatrix from_matrix(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols() || m.rows() < 2)
      throw Error(ErrorCode::ShapeMismatch, "transition matrix must be square with q >= 2");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double e = m(i, j);
        // open interval, no slack
        if (!(e > 0.0 && e < 1.0))
          throw Error(ErrorCode::EntryOutOfRange, "e[" + std::to_string(i) + "][" + std::to_string(j) +
                                                      "] = " + std::to_string(e) + " not in (0, 1)");
      }
      const double s = m.row(i).sum();
      if (std::abs(s - 1.0) > kRowSumTol)
        throw Error(ErrorCode::RowNotStochastic, "row " + std::to_string(i) + " sums to " + std::to_string(s));
    }
    TransitionMatrix t;
    t.entries_ = m;
    return t;
  }

  int q() const { return static_cast<int>(entries_.rows()); }
  double operator()(int i, int j) const { return entries_(i, j); }
  const Eigen::MatrixXd& matrix() const { return entries_; }
  /// e_a: the a-th row as a column vector.
  Eigen::VectorXd row(int a) const { return entries_.row(a).transpose(); }

 private:
  TransitionMatrix() = default;
  Eigen::MatrixXd entries_;
};

/// Flip probabilities eps_1..eps_{q-1}; eps_0 = 1 is implicit.
class NoiseSpec {
 public:
  static NoiseSpec from_values(const std::vector<double>& eps) {
    for (std::size_t a = 0; a < eps.size(); ++a) {
      if (!(eps[a] > 0.0 && eps[a] < 1.0))
        throw Error(ErrorCode::NoiseOutOfRange,
                    "epsilon[" + std::to_string(a + 1) + "] = " + std::to_string(eps[a]) + " not in (0, 1)");
    }
    NoiseSpec n;
    n.eps_ = eps;
    return n;
  }

  /// eps_a for a in 0..q-1, with eps_0 = 1.
  double eps(int a) const { return a == 0 ? 1.0 : eps_[static_cast<std::size_t>(a - 1)]; }
  const std::vector<double>& values() const { return eps_; }
  double max() const { return *std::max_element(eps_.begin(), eps_.end()); }
  double min() const { return *std::min_element(eps_.begin(), eps_.end()); }

 private:
  NoiseSpec() = default;
  std::vector<double> eps_;
};

/// A problem instance satisfying 0 < p <= P < 1 and 0 < eps_a < 1.
class ValidatedModel {
 public:
  const TransitionMatrix& transition() const { return transition_; }
  const NoiseSpec& noise() const { return noise_; }
  int q() const { return transition_.q(); }
  double p() const { return p_; }
  double P() const { return P_; }
  double eps_max() const { return eps_max_; }

  friend ValidatedModel validate_model(const std::vector<std::vector<double>>&, const std::vector<double>&);

 private:
  ValidatedModel(TransitionMatrix t, NoiseSpec n)
      : transition_(std::move(t)),
        noise_(std::move(n)),
        p_(transition_.matrix().minCoeff()),
        P_(transition_.matrix().maxCoeff()),
        eps_max_(noise_.max()) {}

  TransitionMatrix transition_;
  NoiseSpec noise_;
  double p_;
  double P_;
  double eps_max_;
};

inline ValidatedModel validate_model(const std::vector<std::vector<double>>& transition,
                                     const std::vector<double>& epsilon) {
  if (transition.size() < 2)
    throw Error(ErrorCode::ShapeMismatch, "need at least 2 symbols, got " + std::to_string(transition.size()));
  if (epsilon.size() + 1 != transition.size())
    throw Error(ErrorCode::ShapeMismatch, "epsilon has " + std::to_string(epsilon.size()) +
                                              " entries, expected q-1 = " + std::to_string(transition.size() - 1));
  auto t = TransitionMatrix::from_rows(transition);
  auto n = NoiseSpec::from_values(epsilon);
  return ValidatedModel(std::move(t), std::move(n));
}

}  // namespace entrate
