#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "entrate/algebraic.hpp"
#include "entrate/model.hpp"

namespace entrate {

struct Condition1Report {
  double c_witness = 0.0;          ///< constant used for the product check
  bool product_check_passed = false;
  bool perron_simple = false;      ///< E_{a0} has a simple dominant eigenvalue
  bool irreducible = false;        ///< E is irreducible
  int a0 = 0;
  double closed_form_c = 0.0;      ///< min(eps) * p^(q-1)
  bool closed_form_passed = false;

  bool all_passed() const { return product_check_passed && perron_simple && irreducible; }
};

namespace detail {

inline constexpr double kProductTol = 1e-12;

/// min over (a, b) of the smallest entry of E_a E_b - c E_a.
inline double product_slack(const SymbolMatrices& sym, double c) {
  double worst = std::numeric_limits<double>::infinity();
  for (int a = 0; a < sym.q(); ++a)
    for (int b = 0; b < sym.q(); ++b)
      worst = std::min(worst, (sym.mat(a) * sym.mat(b) - c * sym.mat(a)).minCoeff());
  return worst;
}

/// Largest c with E_a E_b >= c E_a entrywise for all a, b.
inline double best_product_constant(const SymbolMatrices& sym) {
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < sym.q(); ++a) {
    for (int b = 0; b < sym.q(); ++b) {
      const Eigen::MatrixXd prod = sym.mat(a) * sym.mat(b);
      for (Eigen::Index i = 0; i < prod.rows(); ++i)
        for (Eigen::Index k = 0; k < prod.cols(); ++k)
          if (sym.mat(a)(i, k) > 0.0) best = std::min(best, prod(i, k) / sym.mat(a)(i, k));
    }
  }
  return best;
}

}  // namespace detail

inline Condition1Report check_condition1(const ValidatedModel& model) {
  const SymbolMatrices sym(model);
  Condition1Report rep;
  rep.a0 = 0;

  rep.closed_form_c = model.noise().min() * std::pow(model.p(), model.q() - 1);
  rep.closed_form_passed = detail::product_slack(sym, rep.closed_form_c) >= -detail::kProductTol;
  if (rep.closed_form_passed) {
    rep.c_witness = rep.closed_form_c;
  } else {
    // Closed-form constant is too large for strong noise; any positive c is enough.
    rep.c_witness = detail::best_product_constant(sym);
  }
  rep.product_check_passed =
      rep.c_witness > 0.0 && detail::product_slack(sym, rep.c_witness) >= -detail::kProductTol;

  Eigen::EigenSolver<Eigen::MatrixXd> es(sym.mat(rep.a0), /*computeEigenvectors=*/false);
  Eigen::VectorXd moduli = es.eigenvalues().cwiseAbs();
  std::sort(moduli.data(), moduli.data() + moduli.size(), std::greater<>());
  const double gap = moduli(0) - moduli(1);
  rep.perron_simple = gap > 1e-12 * std::max(1.0, moduli(0));

  // strict positivity implies irreducibility
  rep.irreducible = model.transition().matrix().minCoeff() > 0.0;
  return rep;
}

}  // namespace entrate
