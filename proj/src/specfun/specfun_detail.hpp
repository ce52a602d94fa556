#pragma once

#include <string_view>

#include "qsd/specfun.hpp"

namespace qsd::specfun::detail {

inline constexpr std::string_view kModule = "specfun";

bool is_nonpositive_integer(Complex z);
bool imag_residue_ok(Complex v);

/// A branch of log Gamma(z) (the imaginary part is only defined mod 2 pi);
/// finite wherever Gamma has no pole, including large |Im z|.
Complex log_gamma(Complex z);

/// e^{-z} I_nu(z) by the ascending series; accurate for moderate z.
Complex bessel_i_scaled_series(Complex nu, double z);

}  // namespace qsd::specfun::detail
