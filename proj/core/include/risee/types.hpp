// SPDX-License-Identifier: Apache-2.0
// risee - max-min energy efficiency for RIS-aided MISO broadcast links

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace risee {

inline constexpr const char* version_string = "0.1.0";

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using CRow = Eigen::RowVectorXcd;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Reflecting-surface architectures, ordered from most to least constrained.
enum class Architecture { NoRIS, LPD, GPD, GPBD };

std::string to_string(Architecture a);
Architecture architecture_from_string(const std::string& s);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

} // namespace risee
