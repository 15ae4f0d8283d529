#pragma once

#include <string>
#include <type_traits>
#include <variant>

namespace shockline {

struct Shock {
  double t_star = 0.0;
};

struct ShockInterval {
  double lower = 0.0;
  double upper = 0.0;
};

struct Global {
  std::string note;
};

/// The search window was exhausted without a decision.
struct Inconclusive {
  double t_max = 0.0;
  std::string note;
};

using ShockClassification = std::variant<Shock, ShockInterval, Global, Inconclusive>;

inline std::string variant_name(const ShockClassification& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Shock>) return "shock";
        if constexpr (std::is_same_v<T, ShockInterval>) return "shock_interval";
        if constexpr (std::is_same_v<T, Global>) return "global";
        return "inconclusive";
      },
      c);
}

inline bool is_shock(const ShockClassification& c) {
  return std::holds_alternative<Shock>(c) || std::holds_alternative<ShockInterval>(c);
}

}  // namespace shockline
