#include "relesc/cyclotomic.hpp"

#include <map>
#include <mutex>

namespace relesc {

namespace {

// Exact quotient of monic integer polynomials (lowest degree first).
std::vector<mpz_class> divide_exact(std::vector<mpz_class> num, const std::vector<mpz_class>& den) {
  const std::size_t dn = den.size() - 1;
  std::vector<mpz_class> q(num.size() - dn);
  for (std::size_t i = num.size(); i-- > dn;) {
    const mpz_class c = num[i];
    q[i - dn] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
  }
  for (std::size_t i = 0; i < dn; ++i)
    if (num[i] != 0) throw InternalError("cyclotomic division left a remainder");
  return q;
}

}  // namespace

std::vector<mpz_class> cyclotomic_polynomial(int d) {
  if (d < 1) throw UsageError("cyclotomic index must be positive");
  static std::mutex mu;
  static std::map<int, std::vector<mpz_class>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(d); it != cache.end()) return it->second;
  }
  // t^d - 1 = prod_{e | d} Phi_e(t)
  std::vector<mpz_class> p(static_cast<std::size_t>(d) + 1);
  p[0] = -1;
  p[static_cast<std::size_t>(d)] = 1;
  for (int e = 1; e < d; ++e)
    if (d % e == 0) p = divide_exact(std::move(p), cyclotomic_polynomial(e));
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(d, p);
  return p;
}

}  // namespace relesc
