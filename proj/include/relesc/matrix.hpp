#pragma once

#include <gmpxx.h>

#include <vector>

#include "relesc/forms.hpp"

namespace relesc {

using QMatrix = Matrix<mpq_class>;
using QVector = std::vector<mpq_class>;

QMatrix identity_matrix(int n);
QMatrix matmul(const QMatrix& a, const QMatrix& b);
QVector matvec(const QMatrix& a, const QVector& x);

/// Exact determinant by fraction-free-ish Gaussian elimination over Q.
mpq_class determinant(const QMatrix& m);

/// Exact inverse; UsageError if singular or not square.
QMatrix inverse(const QMatrix& m);

bool is_square(const QMatrix& m, int n);

}  // namespace relesc
