#pragma once

#include <iosfwd>
#include <limits>
#include <string>

namespace mcond {

/// Determinant in log form: det = sign * exp(log_abs).
///
/// sign == 0 marks a matrix detected singular; log_abs is then -infinity.
struct LogDet {
  int sign = 1;
  double log_abs = 0.0;

  static LogDet singular() {
    return {0, -std::numeric_limits<double>::infinity()};
  }
  bool is_singular() const { return sign == 0; }

  friend bool operator==(const LogDet&, const LogDet&) = default;
};

/// Relative tolerance for "agrees to `digits` significant digits".
constexpr double significant_digits_tolerance(int digits) {
  double tol = 1.0;
  for (int i = 0; i < digits; ++i) tol /= 10.0;
  return tol;
}

/// Agreement of two log-determinants: identical signs and
/// |a - b| <= rel_tol * max(1, |a|, |b|) on log_abs. The unit floor keeps the
/// test meaningful for determinants near +-1, whose log is near zero. Two
/// singular results agree.
bool logdet_agrees(const LogDet& a, const LogDet& b, double rel_tol);

/// "sign=+1 logabs=..." with 15 digits after the decimal point.
std::string format_logdet(const LogDet& d);
std::ostream& operator<<(std::ostream& out, const LogDet& d);

}  // namespace mcond
