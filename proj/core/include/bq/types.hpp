#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace bq {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// One node per row; row-major so a node is a contiguous span.
using NodeSet = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Point = std::span<const double>;

inline Point node(const NodeSet& X, Eigen::Index i) {
    return {X.data() + i * X.cols(), static_cast<std::size_t>(X.cols())};
}

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Cholesky failed on every rung of the nugget ladder.
class FactorizationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class UnsupportedError : public Error {
public:
    using Error::Error;
};

}  // namespace bq
