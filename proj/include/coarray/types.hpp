#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace coarray {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Thrown when an operation requires a hole-free difference coarray.
class NotHoleFree : public std::invalid_argument {
public:
    explicit NotHoleFree(const std::string& what)
        : std::invalid_argument(what + ": array difference coarray has holes") {}
};

}  // namespace coarray
