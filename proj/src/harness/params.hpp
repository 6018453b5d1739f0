#pragma once

// Typed access to JSON parameter objects with schema errors.

#include <initializer_list>
#include <string>
#include <vector>

#include "kpzlab/error.hpp"
#include "kpzlab/harness.hpp"

namespace kpz::harness::detail {

class Params {
 public:
  Params(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    require(j_.is_object(), Errc::config, where_ + ": parameters must be a JSON object");
  }

  /// Rejects keys outside the allowed set.
  void allow(std::initializer_list<const char*> keys) const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      bool known = false;
      for (const char* k : keys) known = known || it.key() == k;
      require(known, Errc::config, where_ + ": unknown key '" + it.key() + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  template <class T>
  T get(const char* key, T fallback) const {
    if (!has(key)) return fallback;
    return as<T>(j_.at(key), key);
  }

  template <class T>
  T need(const char* key) const {
    require(has(key), Errc::config, where_ + ": missing key '" + key + "'");
    return as<T>(j_.at(key), key);
  }

  const json& raw() const { return j_; }

 private:
  template <class T>
  T as(const json& v, const char* key) const {
    try {
      if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        require(v.is_number_integer() || v.is_number_unsigned(), Errc::config,
                where_ + ": '" + key + "' must be an integer");
        if constexpr (std::is_unsigned_v<T>)
          require(!v.is_number_integer() || v.get<long long>() >= 0, Errc::config,
                  where_ + ": '" + key + "' must be nonnegative");
      } else if constexpr (std::is_floating_point_v<T>) {
        require(v.is_number(), Errc::config, where_ + ": '" + key + "' must be a number");
      } else if constexpr (std::is_same_v<T, bool>) {
        require(v.is_boolean(), Errc::config, where_ + ": '" + key + "' must be a boolean");
      } else if constexpr (std::is_same_v<T, std::string>) {
        require(v.is_string(), Errc::config, where_ + ": '" + key + "' must be a string");
      }
      return v.get<T>();
    } catch (const json::exception& e) {
      fail(Errc::config, where_ + ": '" + key + "': " + e.what());
    }
  }

  const json& j_;
  std::string where_;
};

}  // namespace kpz::harness::detail
