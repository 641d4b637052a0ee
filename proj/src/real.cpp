#include "relesc/real.hpp"

#include <cstdio>

namespace relesc {

std::string format_real(const Real& x, int digits) {
  ensure_exponent_range();
  if (x == 0) return "0";
  char* buf = nullptr;
  const int n = mpfr_asprintf(&buf, "%.*Rg", digits, x.backend().data());
  if (n < 0 || buf == nullptr) return "nan";
  std::string s(buf, static_cast<std::size_t>(n));
  mpfr_free_str(buf);
  return s;
}

}  // namespace relesc
