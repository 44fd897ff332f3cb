// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "entrate/cli.hpp"
#include "entrate/entrate.hpp"
#include "test_models.hpp"

using namespace entrate;
using namespace entrate::testing;

namespace {

const std::string kConfigDir = ENTRATE_CONFIG_DIR;

struct Check {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct TableRow {
  int N;
  double H;
  double err;
};

const std::vector<TableRow> kTable1 = {
    {10, 0.71399868740464, 15.6656},    {20, 0.70277846315804, 3.4068},     {30, 0.70083402087899, 0.7408},
    {40, 0.70045844593354, 0.1611},     {50, 0.70038443295765, 0.0350},     {60, 0.70036979023825, 0.0076},
    {70, 0.70036689107994, 0.0016},     {80, 0.70036631697843, 3.6038e-4},  {90, 0.70036620328938, 7.837e-5},
    {100, 0.70036618077546, 1.7044e-5},
};

const std::vector<TableRow> kTable2 = {
    {10, 0.95961052113515, 0.3561},    {20, 0.95961126155225, 0.0030},   {30, 0.95961126164043, 2.6758e-5},
    {40, 0.95961126164044, 2.3193e-7}, {50, 0.95961126164044, 2.0103e-9},
};

Check table_reproduction(const ValidatedModel& model, const std::vector<TableRow>& table) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const auto& row : table) {
    const auto sol = entropy_rate(model, row.N);
    const double diff = std::abs(sol.H_N - row.H);
    worst = std::max(worst, diff);
    c.require(diff <= 1e-10, "N=" + std::to_string(row.N) + " off by " + num(diff));
  }
  const double secs = seconds_since(t0);
  c.require(secs < 1.0, "runtime " + num(secs) + " s");
  if (c.ok) c.detail = "max |dH| = " + num(worst) + ", " + num(secs) + " s";
  return c;
}

Check error_bounds() {
  Check c;
  double worst_ratio = 1.0;
  for (const auto& [model, table] :
       {std::pair{example1(), kTable1}, std::pair{example2(), kTable2}}) {
    const double H150 = entropy_rate(model, 150).H_N;
    for (const auto& row : table) {
      const auto sol = entropy_rate(model, row.N);
      if (!sol.err_bound) {
        c.require(false, "missing err_bound at N=" + std::to_string(row.N));
        continue;
      }
      const double ratio = std::max(*sol.err_bound / row.err, row.err / *sol.err_bound);
      worst_ratio = std::max(worst_ratio, ratio);
      c.require(ratio <= 2.0, "N=" + std::to_string(row.N) + " bound " + num(*sol.err_bound) + " vs " + num(row.err));
      c.require(std::abs(sol.H_N - H150) <= *sol.err_bound,
                "|H_N - H_150| exceeds bound at N=" + std::to_string(row.N));
    }
  }
  if (c.ok) c.detail = "worst bound ratio " + num(worst_ratio);
  return c;
}

Check oracle_agreement() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  struct Case {
    ValidatedModel model;
    int n;
    int N;
    double tol;
  };
  std::string detail;
  for (const auto& cs : {Case{example1(), 16, 100, 1e-3}, Case{example2(), 10, 50, 5e-3}}) {
    const SymbolMatrices sym(cs.model);
    const auto tau = stationary_distribution(cs.model.transition());
    const auto est = entropy_estimates(sym, tau, cs.n);
    const double H = entropy_rate(cs.model, cs.N).H_N;
    const double diff = std::abs(est.rate_cond - H);
    c.require(diff <= cs.tol, "q=" + std::to_string(cs.model.q()) + " diff " + num(diff));
    detail += "q=" + std::to_string(cs.model.q()) + ": |S_n - S_{n-1} - H| = " + num(diff) + "; ";
  }
  const double secs = seconds_since(t0);
  c.require(secs < 10.0, "runtime " + num(secs) + " s");
  if (c.ok) c.detail = detail + num(secs) + " s";
  return c;
}

Check degenerate_closed_form() {
  Check c;
  const auto model = uniform2();
  const SymbolMatrices sym(model);
  const auto atlas = compute_support(sym, 100);
  c.require(atlas.chain(1).size() == 1 && atlas.finite_support, "support did not collapse to one point");
  c.require(atlas.chain(1)[0].point.l1_distance(sym.row(0)) <= 1e-15, "support point is not e_0");
  const double H = entropy_rate(sym, atlas, LogBase::bits()).H_N;
  const double diff = std::abs(H - 0.8112781244591);
  c.require(diff <= 1e-12, "H = " + fmt14(H));
  if (c.ok) c.detail = "H = " + fmt14(H);
  return c;
}

Check noise_free_continuity() {
  Check c;
  const auto model = example1(1e-9);
  const double H = entropy_rate(model, 100, LogBase::bits()).H_N;
  const double ref = markov_entropy_rate(model.transition(), LogBase::bits());
  c.require(std::abs(H - ref) <= 1e-6, "diff " + num(std::abs(H - ref)));
  if (c.ok) c.detail = "H_100 = " + fmt14(H) + ", markov = " + fmt14(ref);
  return c;
}

// Sum of mu over all q^n words via depth-first products.
double total_word_mass(const SymbolMatrices& sym, const Eigen::VectorXd& v, int depth) {
  if (depth == 0) return v.sum();
  double s = 0.0;
  for (int a = 0; a < sym.q(); ++a) s += total_word_mass(sym, sym.mat(a).transpose() * v, depth - 1);
  return s;
}

Check property_suites() {
  Check c;
  std::mt19937_64 rng(20240601);
  int with_r = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int q = 2 + trial % 3;
    const auto model = random_model(rng, q);
    const SymbolMatrices sym(model);
    const auto tau = stationary_distribution(model.transition());
    const std::string tag = " (trial " + std::to_string(trial) + ", q=" + std::to_string(q) + ")";

    // Gamma_0 closure and [p, P] bounds
    for (int k = 0; k < 5; ++k) {
      const auto g = gamma0(sym, random_simplex_point(rng, q));
      c.require(g.on_simplex() && g.w.minCoeff() >= model.p() - 1e-15 && g.w.maxCoeff() <= model.P() + 1e-15,
                "Gamma_0 bounds" + tag);
    }
    // sum_a E_a = E
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(q, q);
    for (const auto& E : sym.mats()) total += E;
    c.require((total - model.transition().matrix()).cwiseAbs().maxCoeff() <= 1e-14, "sum E_a" + tag);

    // additivity and total mass, n <= 6
    for (int n = 1; n <= 6; ++n)
      c.require(std::abs(total_word_mass(sym, tau.tau.w, n) - 1.0) <= 1e-10, "total mass n=" + std::to_string(n) + tag);
    std::uniform_int_distribution<int> pick(0, q - 1);
    std::vector<int> w(5);
    for (auto& a : w) a = pick(rng);
    double ext = 0.0;
    for (int a = 0; a < q; ++a) {
      auto wa = w;
      wa.push_back(a);
      ext += word_measure(sym, tau, wa);
    }
    c.require(std::abs(ext - word_measure(sym, tau, w)) <= 1e-12, "additivity" + tag);

    // c_{j,m} <= r^m
    const auto atlas = compute_support(sym, 120);
    const auto rates = contraction_rates(sym, atlas);
    if (rates.r) {
      ++with_r;
      for (const auto& chain : atlas.chains)
        for (const auto& pt : chain)
          c.require(pt.coeff <= std::pow(*rates.r, pt.m) * (1 + 1e-12), "c_{j,m} <= r^m" + tag);
    }

    // rate_cond nonincreasing
    const int n = q == 2 ? 8 : (q == 3 ? 6 : 5);
    const auto S = block_entropies(sym, tau, n);
    for (int k = 3; k <= n; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      c.require(S[uk - 1] - S[uk - 2] <= S[uk - 2] - S[uk - 3] + 1e-12, "rate_cond monotone" + tag);
    }

    // weight normalization
    const auto sol = entropy_rate(sym, atlas, LogBase::q_ary());
    const double bound = sol.err_bound ? *sol.err_bound : sol.err_estimate_gamma;
    c.require(std::abs(sol.total_mass - 1.0) <= std::max(10 * bound, 1e-12), "weight normalization" + tag);
  }
  if (c.ok) c.detail = "200 models, " + std::to_string(with_r) + " with eps < p";
  return c;
}

std::vector<std::vector<double>> run_csv(const std::vector<std::string>& args, int& code) {
  std::ostringstream out, err;
  code = cli::run(args, out, err);
  std::vector<std::vector<double>> rows;
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell.empty() ? NAN : std::stod(cell));
    rows.push_back(cells);
  }
  return rows;
}

Check figure_data() {
  Check c;
  int code = 0;
  // support of the measure, eps = 0.2
  const auto pts = run_csv({"-c", kConfigDir + "/example1_eps02.json", "support", "--n-terms", "60"}, code);
  c.require(code == 0 && pts.size() > 5, "support subcommand failed");
  const SymbolMatrices sym(example1(0.2));
  const auto tb = fixed_point_tau_bar(sym);
  double prev = INFINITY;
  for (const auto& row : pts) {
    const double d = std::abs(row[2] - tb[0]) + std::abs(row[3] - tb[1]);
    c.require(d <= prev + 1e-13, "support distance to tau_bar increased at m=" + num(row[1]));
    prev = d;
  }
  c.require(prev <= 1e-11, "support does not reach tau_bar");

  // entropy and error curves
  for (const auto& cfg : {"/example1.json", "/example2.json"}) {
    const auto rows = run_csv({"-c", kConfigDir + cfg, "sweep", "--from", "1", "--to", "100", "--step", "1"}, code);
    c.require(code == 0 && rows.size() == 100, std::string("sweep failed for ") + cfg);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i > 0) c.require(rows[i][2] < rows[i - 1][2], std::string("bound not decaying in ") + cfg);
      for (std::size_t k = i + 1; k < rows.size(); ++k)
        c.require(std::abs(rows[k][1] - rows[i][1]) <= rows[i][2], std::string("sweep not Cauchy in ") + cfg);
    }
  }
  if (c.ok) c.detail = std::to_string(pts.size()) + " support points, final distance " + num(prev);
  return c;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"1 Table I (q=2) within 1e-10", [] { return table_reproduction(example1(), kTable1); }},
      {"2 Table II (q=3) within 1e-10", [] { return table_reproduction(example2(), kTable2); }},
      {"3 err(N) within 2x and |H_N - H_150| <= err(N)", error_bounds},
      {"4 block-entropy oracle agreement", oracle_agreement},
      {"5 degenerate single-point support = h2(0.75)", degenerate_closed_form},
      {"6 noise-free continuity", noise_free_continuity},
      {"7 property suites on random models", property_suites},
      {"8 figure data (support, sweep)", figure_data},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Check c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s: %s\n", c.ok ? "PASS" : "FAIL", name.c_str(), c.detail.c_str());
    failures += !c.ok;
  }
  return failures == 0 ? 0 : 1;
}
