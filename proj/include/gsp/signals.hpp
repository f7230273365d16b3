#pragma once

#include <cstdint>
#include <limits>

#include <Eigen/Core>

#include "gsp/spectral.hpp"

namespace gsp {

struct SignalModel {
  enum class Kind { exact_bandlimited, approx_bandlimited };
  Kind kind = Kind::exact_bandlimited;
  int r = 1;
  double decay = 4.0;  // approx only
  double mean = 1.0;
  double stddev = 0.5;
};

// Exact: f = sum_{i<r} c_i u_i. Approx: all N coefficients drawn, then scaled
// by h(lambda) = 1 up to lambda_r and exp(-decay (lambda - lambda_r)) beyond.
Eigen::VectorXd gen_signal(const GftBasis& basis, const SignalModel& model,
                           std::uint64_t seed);

inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

// Adds Gaussian noise rescaled so that 10 log10(|f|^2 / |n|^2) equals snr_db.
Eigen::VectorXd add_noise_snr(const Eigen::VectorXd& f, double snr_db, std::uint64_t seed);

// Adds iid N(0, stddev^2) noise without rescaling.
Eigen::VectorXd add_noise_iid(const Eigen::VectorXd& f, double stddev, std::uint64_t seed);

}  // namespace gsp
