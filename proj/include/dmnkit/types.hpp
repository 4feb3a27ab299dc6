// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace dmnkit {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Free-space wave impedance in ohms.
inline constexpr double eta0 = 376.730313668;

/// Nepers per decibel (20/ln 10 dB per neper).
inline constexpr double db_per_neper = 8.685889638065035;

inline constexpr Complex j1{0.0, 1.0};

inline double to_db(double magnitude) { return 20.0 * std::log10(magnitude); }
inline double from_db(double db) { return std::pow(10.0, db / 20.0); }

inline double deg_to_rad(double deg) { return deg * pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / pi; }

}  // namespace dmnkit
