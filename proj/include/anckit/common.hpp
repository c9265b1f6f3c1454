#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace anckit {

/// Raised when an input violates a documented precondition. `field()` names
/// the offending parameter, column or config key.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ValidationError(field, what);
}

inline void require_finite(double v, const char* field) {
  if (!std::isfinite(v)) throw ValidationError(field, "must be finite");
}

// std::round rounds half away from zero.
inline double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

inline double round_cents(double dollars) { return round_to(dollars, 2); }

/// Integer cents. Sums over Cents are exact, which the bill-of-materials
/// roll-up relies on.
struct Cents {
  std::int64_t value = 0;

  static Cents from_dollars(double dollars) {
    return Cents{static_cast<std::int64_t>(std::llround(dollars * 100.0))};
  }

  double dollars() const { return static_cast<double>(value) / 100.0; }

  Cents& operator+=(Cents o) {
    value += o.value;
    return *this;
  }
  Cents& operator-=(Cents o) {
    value -= o.value;
    return *this;
  }
  friend Cents operator+(Cents a, Cents b) { return a += b; }
  friend Cents operator-(Cents a, Cents b) { return a -= b; }
  friend auto operator<=>(const Cents&, const Cents&) = default;
};

}  // namespace anckit
