#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace gdn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
// Row-major compressed storage so solver kernels can iterate rows.
using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// File and parsing failures; the CLI maps these to exit code 2.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace gdn
