#pragma once

#include <cstdlib>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entrate/condition1.hpp"
#include "entrate/config.hpp"
#include "entrate/entropy.hpp"
#include "entrate/format.hpp"
#include "entrate/oracle.hpp"
#include "entrate/support.hpp"

namespace entrate::cli {

enum class LogLevel { quiet, info, debug };

inline LogLevel log_level_from_env() {
  const char* v = std::getenv("ENTRATE_LOG");
  if (!v) return LogLevel::quiet;
  const std::string s(v);
  if (s == "debug") return LogLevel::debug;
  if (s == "info") return LogLevel::info;
  return LogLevel::quiet;
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitIo = 3;

namespace detail {

inline std::string opt14(const std::optional<double>& v) { return v ? fmt14(*v) : std::string(); }

struct Logger {
  LogLevel level;
  std::ostream& err;
  void info(const std::string& msg) const {
    if (level != LogLevel::quiet) err << "info: " << msg << '\n';
  }
  void debug(const std::string& msg) const {
    if (level == LogLevel::debug) err << "debug: " << msg << '\n';
  }
};

inline void print_solution_table(std::ostream& out, const EntropySolution& sol) {
  out << "q              " << sol.q << '\n';
  out << "N              " << sol.N << '\n';
  out << "log_base       " << sol.log_base.name() << '\n';
  out << "H_N            " << fmt14(sol.H_N) << '\n';
  out << "err_bound      " << (sol.err_bound ? fmt14(*sol.err_bound) : "n/a (eps_max >= p)") << '\n';
  out << "gamma_hat      " << fmt14(sol.gamma_hat) << '\n';
  out << "r              " << (sol.r ? fmt14(*sol.r) : "n/a") << '\n';
  out << "A_dagger_norm  " << fmt14(sol.A_dagger_norm) << '\n';
  for (Eigen::Index j = 0; j < sol.phi_hat.size(); ++j)
    out << "phi_hat[" << j + 1 << "]     " << fmt14(sol.phi_hat(j)) << '\n';
}

}  // namespace detail

/// Runs the command line and returns the process exit status. Data goes to
/// `out`, diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entropy rate of hidden Markov processes with an unambiguous symbol"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("-c,--config", config_path, "JSON model file")->required();

  LogBase log_base = LogBase::q_ary();
  bool log_base_set = false;
  auto add_log_base = [&](CLI::App* sub) {
    sub->add_option_function<std::string>(
           "--log-base",
           [&](const std::string& s) {
             log_base = *LogBase::parse(s);
             log_base_set = true;
           },
           "2, e or q (default: config value, else q)")
        ->check(CLI::IsMember({"2", "e", "q"}));
  };

  int n_terms = -1;
  std::string format = "table";
  auto* entropy = app.add_subcommand("entropy", "truncated entropy rate H_N with error bound");
  entropy->add_option("-n,--n-terms", n_terms, "truncation depth N")->check(CLI::NonNegativeNumber);
  entropy->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));
  add_log_base(entropy);

  int from = 10, to = 100, step = 10;
  auto* sweep = app.add_subcommand("sweep", "CSV of (N, H_N, err_bound)");
  sweep->add_option("--from", from)->check(CLI::NonNegativeNumber);
  sweep->add_option("--to", to)->check(CLI::NonNegativeNumber);
  sweep->add_option("--step", step)->check(CLI::PositiveNumber);
  add_log_base(sweep);

  double dedup_tol = kDefaultDedupTol;
  auto* support = app.add_subcommand("support", "CSV of support atlas points");
  support->add_option("-n,--n-terms", n_terms, "truncation depth N")->check(CLI::NonNegativeNumber);
  support->add_option("--dedup-tol", dedup_tol)->check(CLI::NonNegativeNumber);

  int block_len = 10;
  auto* oracle = app.add_subcommand("oracle", "exact block entropies S_k for k = 1..n");
  oracle->add_option("-n,--block-len", block_len)->check(CLI::PositiveNumber);
  add_log_base(oracle);

  auto* validate = app.add_subcommand("validate", "check the model assumptions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const detail::Logger log{log_level_from_env(), err};
  try {
    const ModelConfig cfg = parse_config(config_path);
    const ValidatedModel model = validate_config(cfg);
    const LogBase base = log_base_set ? log_base : cfg.log_base;
    log.info("model q=" + std::to_string(model.q()) + " p=" + fmt14(model.p()) + " P=" + fmt14(model.P()));

    if (*entropy) {
      const int N = n_terms >= 0 ? n_terms : cfg.n_terms;
      const auto sol = entropy_rate(model, N, base);
      log.debug("total mass " + fmt14(sol.total_mass));
      if (format == "json") {
        out << solution_to_json(sol, cfg).dump() << '\n';
      } else {
        detail::print_solution_table(out, sol);
      }
    } else if (*sweep) {
      if (to < from) throw Error(ErrorCode::SchemaError, "--to must be >= --from");
      const SymbolMatrices sym(model);
      const SimplexPoint tau_bar = fixed_point_tau_bar(sym);
      out << "N,H_N,err_bound\n";
      for (int N = from; N <= to; N += step) {
        const auto sol = entropy_rate(sym, compute_support(sym, N, kDefaultDedupTol, tau_bar), base);
        out << N << ',' << fmt14(sol.H_N) << ',' << detail::opt14(sol.err_bound) << '\n';
      }
    } else if (*support) {
      const int N = n_terms >= 0 ? n_terms : cfg.n_terms;
      const SymbolMatrices sym(model);
      const auto atlas = compute_support(sym, N, dedup_tol);
      log.info("tau_bar reached: " + std::string(atlas.finite_support ? "yes" : "no"));
      write_atlas_csv(out, atlas);
    } else if (*oracle) {
      const SymbolMatrices sym(model);
      const auto tau = stationary_distribution(model.transition());
      const auto S = block_entropies(sym, tau, block_len, base);
      out << "k,S_k,rate_avg,rate_cond\n";
      for (int k = 1; k <= block_len; ++k) {
        const double sk = S[static_cast<std::size_t>(k - 1)];
        const double prev = k > 1 ? S[static_cast<std::size_t>(k - 2)] : 0.0;
        out << k << ',' << fmt14(sk) << ',' << fmt14(sk / k) << ',' << fmt14(sk - prev) << '\n';
      }
    } else if (*validate) {
      const auto rep = check_condition1(model);
      out << "assumption1 pass\n";
      out << "p " << fmt14(model.p()) << '\n';
      out << "P " << fmt14(model.P()) << '\n';
      out << "eps_max " << fmt14(model.eps_max()) << '\n';
      out << "c_witness " << fmt14(rep.c_witness) << '\n';
      out << "closed_form_c " << fmt14(rep.closed_form_c) << (rep.closed_form_passed ? " pass" : " fail") << '\n';
      out << "product_check " << (rep.product_check_passed ? "pass" : "fail") << '\n';
      out << "perron_simple " << (rep.perron_simple ? "pass" : "fail") << '\n';
      out << "irreducible " << (rep.irreducible ? "pass" : "fail") << '\n';
      return rep.all_passed() ? kExitOk : kExitValidation;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.category());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"entrate"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace entrate::cli
