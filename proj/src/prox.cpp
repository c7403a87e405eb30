#include "gdn/prox.hpp"

#include <cmath>

namespace gdn {

double soft_threshold(double x, double eta) {
    if (eta < 0.0) throw Error("soft_threshold: threshold must be nonnegative");
    const double mag = std::abs(x) - eta;
    return mag > 0.0 ? (x > 0.0 ? mag : -mag) : 0.0;
}

Matrix soft_threshold(const Matrix& x, double eta) {
    if (eta < 0.0) throw Error("soft_threshold: threshold must be nonnegative");
    return x.unaryExpr([eta](double v) {
        const double mag = std::abs(v) - eta;
        return mag > 0.0 ? (v > 0.0 ? mag : -mag) : 0.0;
    });
}

Matrix soft_threshold_rows(const Matrix& m, const Vector& eta) {
    if (eta.size() != m.rows())
        throw Error("soft_threshold_rows: threshold vector length must equal row count");
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (eta[i] < 0.0) throw Error("soft_threshold_rows: negative threshold entry");
        const double norm = m.row(i).norm();
        if (norm > eta[i]) {
            out.row(i) = m.row(i) * ((norm - eta[i]) / norm);
        } else {
            out.row(i).setZero();  // includes the zero-row case for any eta
        }
    }
    return out;
}

Matrix batch_threshold(const Matrix& m, const Matrix& delta) {
    if (m.rows() != delta.rows() || m.cols() != delta.cols())
        throw Error("batch_threshold: shape mismatch");
    if ((delta.array() < 0.0).any())
        throw Error("batch_threshold: negative threshold entry");
    return m.binaryExpr(delta, [](double v, double eta) {
        const double mag = std::abs(v) - eta;
        return mag > 0.0 ? (v > 0.0 ? mag : -mag) : 0.0;
    });
}

}  // namespace gdn
