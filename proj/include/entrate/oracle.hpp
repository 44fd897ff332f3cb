#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <random>
#include <vector>

#include "entrate/algebraic.hpp"
#include "entrate/error.hpp"
#include "entrate/log_base.hpp"

namespace entrate {

/// Largest number of words a block enumeration will visit.
inline constexpr double kMaxBlockWords = 1e7;

namespace detail {

inline void check_block_size(int q, int n) {
  if (n < 1) throw Error(ErrorCode::BlockTooLarge, "block length must be >= 1");
  if (n * std::log(static_cast<double>(q)) > std::log(kMaxBlockWords) + 1e-9)
    throw Error(ErrorCode::BlockTooLarge,
                std::to_string(q) + "^" + std::to_string(n) + " words exceeds the enumeration cap");
}

// Depth-first over words; v = (E_{w_1} ... E_{w_k})^T tau. acc[k-1] collects
// -sum mu log mu over words of length k.
inline void enumerate_words(const SymbolMatrices& sym, const Eigen::VectorXd& v, int depth, int n,
                            std::vector<double>& acc) {
  for (int a = 0; a < sym.q(); ++a) {
    Eigen::VectorXd next = sym.mat(a).transpose() * v;
    const double mu = next.sum();
    if (mu <= 0.0) continue;  // every extension has measure zero too
    acc[static_cast<std::size_t>(depth)] -= mu * std::log(mu);
    if (depth + 1 < n) enumerate_words(sym, next, depth + 1, n, acc);
  }
}

}  // namespace detail

/// Exact S_1..S_n in one enumeration of all q^n words.
inline std::vector<double> block_entropies(const SymbolMatrices& sym, const StationaryDistribution& tau, int n,
                                           LogBase base = LogBase::q_ary()) {
  const int q = sym.q();
  detail::check_block_size(q, n);

  // One subtree per first symbol, reduced in symbol order.
  std::vector<std::future<std::vector<double>>> parts;
  for (int a = 0; a < q; ++a) {
    parts.push_back(std::async(std::launch::async, [&sym, &tau, a, n] {
      std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
      const Eigen::VectorXd v = sym.mat(a).transpose() * tau.tau.w;
      const double mu = v.sum();
      if (mu > 0.0) {
        acc[0] -= mu * std::log(mu);
        if (n > 1) detail::enumerate_words(sym, v, 1, n, acc);
      }
      return acc;
    }));
  }
  std::vector<double> total(static_cast<std::size_t>(n), 0.0);
  for (auto& part : parts) {
    const auto acc = part.get();
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += acc[k];
  }
  const double scale = base.ln_base(q);
  for (double& s : total) s /= scale;
  return total;
}

/// S_n = -sum_{|w| = n} mu(w) log mu(w).
inline double block_entropy(const SymbolMatrices& sym, const StationaryDistribution& tau, int n,
                            LogBase base = LogBase::q_ary()) {
  return block_entropies(sym, tau, n, base).back();
}

struct EntropyEstimates {
  double rate_avg = 0.0;   ///< S_n / n
  double rate_cond = 0.0;  ///< S_n - S_{n-1}
};

inline EntropyEstimates entropy_estimates(const SymbolMatrices& sym, const StationaryDistribution& tau, int n,
                                          LogBase base = LogBase::q_ary()) {
  if (n < 2) throw Error(ErrorCode::BlockTooLarge, "entropy estimates need n >= 2");
  const auto S = block_entropies(sym, tau, n, base);
  const auto un = static_cast<std::size_t>(n);
  return {S[un - 1] / n, S[un - 1] - S[un - 2]};
}

/// Entropy rate of the noiseless chain: -sum_i tau_i sum_j e_ij log e_ij.
inline double markov_entropy_rate(const TransitionMatrix& transition, LogBase base = LogBase::q_ary()) {
  const auto tau = stationary_distribution(transition);
  const int q = transition.q();
  double h = 0.0;
  for (int i = 0; i < q; ++i) {
    double row = 0.0;
    for (int j = 0; j < q; ++j) row += entropy_term(transition(i, j), base, q);
    h += tau.tau[i] * row;
  }
  return h;
}

struct SimulatedPaths {
  std::vector<int> hidden;    ///< X_1..X_length
  std::vector<int> observed;  ///< Y_1..Y_length
};

/// X_1 ~ tau, X_{k+1} ~ row X_k of E; Y_k = X_k unless X_k != 0 is flipped
/// to 0 with probability eps_{X_k}. Deterministic for a given seed.
inline SimulatedPaths simulate_paths(const ValidatedModel& model, std::size_t length, std::uint64_t seed) {
  const int q = model.q();
  const auto tau = stationary_distribution(model.transition());
  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> initial(tau.tau.w.data(), tau.tau.w.data() + q);
  std::vector<std::discrete_distribution<int>> step;
  for (int i = 0; i < q; ++i) {
    const Eigen::VectorXd row = model.transition().row(i);
    step.emplace_back(row.data(), row.data() + q);
  }
  std::uniform_real_distribution<double> flip(0.0, 1.0);

  SimulatedPaths out;
  out.hidden.reserve(length);
  out.observed.reserve(length);
  int x = 0;
  for (std::size_t k = 0; k < length; ++k) {
    x = k == 0 ? initial(rng) : step[static_cast<std::size_t>(x)](rng);
    int y = x;
    if (x != 0 && flip(rng) < model.noise().eps(x)) y = 0;
    out.hidden.push_back(x);
    out.observed.push_back(y);
  }
  return out;
}

inline std::vector<int> simulate_path(const ValidatedModel& model, std::size_t length, std::uint64_t seed) {
  return simulate_paths(model, length, seed).observed;
}

}  // namespace entrate
