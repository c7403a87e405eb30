#pragma once

#include "gdn/types.hpp"

namespace gdn {

// sign(x) * max(|x| - eta, 0)
double soft_threshold(double x, double eta);
Matrix soft_threshold(const Matrix& x, double eta);

// Row i maps to (M_i / ||M_i||) * max(||M_i|| - eta_i, 0); zero rows stay zero.
Matrix soft_threshold_rows(const Matrix& m, const Vector& eta);

// Elementwise soft threshold with a per-entry threshold matrix.
Matrix batch_threshold(const Matrix& m, const Matrix& delta);

}  // namespace gdn
