#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "entrate/entropy.hpp"
#include "entrate/error.hpp"
#include "entrate/log_base.hpp"

namespace entrate {

struct ModelConfig {
  int q = 0;
  std::vector<std::vector<double>> transition;
  std::vector<double> epsilon;
  int n_terms = 100;
  LogBase log_base = LogBase::q_ary();
};

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

[[noreturn]] inline void schema_error(const std::string& field, const std::string& why) {
  throw Error(ErrorCode::SchemaError, "field '" + field + "': " + why);
}

inline std::vector<double> number_array(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array()) schema_error(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) schema_error(field + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(j[i].get<double>());
  }
  return out;
}

}  // namespace detail

/// Build a config from an already-parsed JSON document. Shapes are checked
/// against q; value ranges are left to validate_model.
inline ModelConfig config_from_json(const nlohmann::json& doc) {
  using detail::schema_error;
  if (!doc.is_object()) schema_error("<root>", "expected an object");
  for (const auto& [key, _] : doc.items())
    if (key != "q" && key != "transition" && key != "epsilon" && key != "n_terms" && key != "log_base")
      schema_error(key, "unknown field");

  ModelConfig cfg;
  if (!doc.contains("q")) schema_error("q", "missing");
  if (!doc["q"].is_number_integer()) schema_error("q", "expected an integer");
  cfg.q = doc["q"].get<int>();
  if (cfg.q < 2) schema_error("q", "must be >= 2");

  if (!doc.contains("transition")) schema_error("transition", "missing");
  const auto& t = doc["transition"];
  if (!t.is_array()) schema_error("transition", "expected an array of rows");
  if (t.size() != static_cast<std::size_t>(cfg.q))
    schema_error("transition", "has " + std::to_string(t.size()) + " rows, expected q = " + std::to_string(cfg.q));
  for (std::size_t i = 0; i < t.size(); ++i) {
    const std::string name = "transition[" + std::to_string(i) + "]";
    auto row = detail::number_array(t[i], name);
    if (row.size() != static_cast<std::size_t>(cfg.q))
      schema_error(name, "has " + std::to_string(row.size()) + " entries, expected q = " + std::to_string(cfg.q));
    cfg.transition.push_back(std::move(row));
  }

  if (!doc.contains("epsilon")) schema_error("epsilon", "missing");
  cfg.epsilon = detail::number_array(doc["epsilon"], "epsilon");
  if (cfg.epsilon.size() != static_cast<std::size_t>(cfg.q - 1))
    schema_error("epsilon", "has " + std::to_string(cfg.epsilon.size()) + " entries, expected q-1 = " +
                                std::to_string(cfg.q - 1));

  if (doc.contains("n_terms")) {
    if (!doc["n_terms"].is_number_integer() || doc["n_terms"].get<long long>() < 0)
      schema_error("n_terms", "expected a nonnegative integer");
    cfg.n_terms = doc["n_terms"].get<int>();
  }
  if (doc.contains("log_base")) {
    const auto& lb = doc["log_base"];
    std::optional<LogBase> base;
    if (lb.is_number_integer() && lb.get<int>() == 2) base = LogBase::bits();
    if (lb.is_string()) base = LogBase::parse(lb.get<std::string>());
    if (!base) schema_error("log_base", "expected 2, \"e\" or \"q\"");
    cfg.log_base = *base;
  }
  return cfg;
}

inline ModelConfig parse_config_text(const std::string& text, const std::string& source = "<string>") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, source + ": " + detail::line_col(text, e.byte == 0 ? 0 : e.byte - 1) +
                                           ": " + e.what());
  }
  return config_from_json(doc);
}

inline ModelConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!std::filesystem::is_regular_file(path) || !in)
    throw Error(ErrorCode::FileNotFound, path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

inline nlohmann::json config_to_json(const ModelConfig& cfg) {
  return nlohmann::json{{"q", cfg.q},
                        {"transition", cfg.transition},
                        {"epsilon", cfg.epsilon},
                        {"n_terms", cfg.n_terms},
                        {"log_base", cfg.log_base.name()}};
}

inline ValidatedModel validate_config(const ModelConfig& cfg) { return validate_model(cfg.transition, cfg.epsilon); }

/// Machine-readable record of a solution. `model` is itself a valid config
/// document, so the record can be fed back in to recompute.
inline nlohmann::json solution_to_json(const EntropySolution& sol, const ModelConfig& cfg) {
  auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  ModelConfig echoed = cfg;
  echoed.n_terms = sol.N;
  echoed.log_base = sol.log_base;
  return nlohmann::json{{"q", sol.q},
                        {"N", sol.N},
                        {"log_base", sol.log_base.name()},
                        {"H_N", sol.H_N},
                        {"err_bound", opt(sol.err_bound)},
                        {"gamma_hat", sol.gamma_hat},
                        {"r", opt(sol.r)},
                        {"phi_hat", std::vector<double>(sol.phi_hat.data(), sol.phi_hat.data() + sol.phi_hat.size())},
                        {"A_dagger_norm", sol.A_dagger_norm},
                        {"model", config_to_json(echoed)}};
}

}  // namespace entrate
