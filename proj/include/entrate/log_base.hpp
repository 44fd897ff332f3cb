#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace entrate {

/// Unit of information. `q_ary` measures in base-q digits, so the entropy
/// rate of a q-symbol source lies in [0, 1].
class LogBase {
 public:
  enum class Kind { bits, nats, q_ary };

  constexpr LogBase() = default;
  constexpr explicit LogBase(Kind kind) : kind_(kind) {}

  static constexpr LogBase bits() { return LogBase(Kind::bits); }
  static constexpr LogBase nats() { return LogBase(Kind::nats); }
  static constexpr LogBase q_ary() { return LogBase(Kind::q_ary); }

  constexpr Kind kind() const { return kind_; }

  /// ln(base) for an alphabet of q symbols.
  double ln_base(int q) const {
    switch (kind_) {
      case Kind::bits: return std::log(2.0);
      case Kind::nats: return 1.0;
      case Kind::q_ary: return std::log(static_cast<double>(q));
    }
    return 1.0;
  }

  std::string name() const {
    switch (kind_) {
      case Kind::bits: return "2";
      case Kind::nats: return "e";
      case Kind::q_ary: return "q";
    }
    return "?";
  }

  static std::optional<LogBase> parse(std::string_view s) {
    if (s == "2") return bits();
    if (s == "e") return nats();
    if (s == "q") return q_ary();
    return std::nullopt;
  }

  friend constexpr bool operator==(LogBase, LogBase) = default;

 private:
  Kind kind_ = Kind::q_ary;
};

/// -x log x with 0 log 0 = 0, in units of `base`.
inline double entropy_term(double x, LogBase base, int q) {
  if (x <= 0.0) return 0.0;
  return -x * std::log(x) / base.ln_base(q);
}

}  // namespace entrate
