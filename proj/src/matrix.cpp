#include "relesc/matrix.hpp"

#include <utility>

namespace relesc {

QMatrix identity_matrix(int n) {
  QMatrix m(static_cast<std::size_t>(n), QVector(static_cast<std::size_t>(n)));
  for (std::size_t i = 0; i < m.size(); ++i) m[i][i] = 1;
  return m;
}

bool is_square(const QMatrix& m, int n) {
  if (static_cast<int>(m.size()) != n) return false;
  for (const auto& row : m)
    if (static_cast<int>(row.size()) != n) return false;
  return true;
}

QMatrix matmul(const QMatrix& a, const QMatrix& b) {
  if (a.empty() || b.empty() || a[0].size() != b.size())
    throw UsageError("matrix shapes do not match for multiplication");
  QMatrix c(a.size(), QVector(b[0].size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (sgn(a[i][k]) == 0) continue;
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

QVector matvec(const QMatrix& a, const QVector& x) {
  QVector y(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != x.size()) throw UsageError("matrix/vector shapes do not match");
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  }
  return y;
}

mpq_class determinant(const QMatrix& m) {
  const int n = static_cast<int>(m.size());
  if (!is_square(m, n) || n == 0) throw UsageError("determinant needs a non-empty square matrix");
  QMatrix a = m;
  mpq_class det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (piv < n && sgn(a[piv][c]) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      if (sgn(a[r][c]) == 0) continue;
      mpq_class f = a[r][c] / a[c][c];
      for (int j = c; j < n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return det;
}

QMatrix inverse(const QMatrix& m) {
  const int n = static_cast<int>(m.size());
  if (!is_square(m, n) || n == 0) throw UsageError("inverse needs a non-empty square matrix");
  QMatrix a = m;
  QMatrix inv = identity_matrix(n);
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (piv < n && sgn(a[piv][c]) == 0) ++piv;
    if (piv == n) throw UsageError("matrix is singular");
    std::swap(a[piv], a[c]);
    std::swap(inv[piv], inv[c]);
    const mpq_class p = a[c][c];
    for (int j = 0; j < n; ++j) {
      a[c][j] /= p;
      inv[c][j] /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || sgn(a[r][c]) == 0) continue;
      const mpq_class f = a[r][c];
      for (int j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

}  // namespace relesc
