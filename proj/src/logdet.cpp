#include "mcond/logdet.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace mcond {

bool logdet_agrees(const LogDet& a, const LogDet& b, double rel_tol) {
  if (a.sign != b.sign) return false;
  if (a.sign == 0) return true;
  if (!std::isfinite(a.log_abs) || !std::isfinite(b.log_abs)) return false;
  const double scale = std::max({1.0, std::abs(a.log_abs), std::abs(b.log_abs)});
  return std::abs(a.log_abs - b.log_abs) <= rel_tol * scale;
}

std::string format_logdet(const LogDet& d) {
  const char* sign = d.sign > 0 ? "+1" : d.sign < 0 ? "-1" : "0";
  if (d.sign == 0) return std::string("sign=") + sign + " logabs=-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15f", d.log_abs);
  const std::string value = buf;
  return std::string("sign=") + sign + " logabs=" + value;
}

std::ostream& operator<<(std::ostream& out, const LogDet& d) {
  return out << format_logdet(d);
}

}  // namespace mcond
