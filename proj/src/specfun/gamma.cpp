#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qsd/errors.hpp"
#include "qsd/specfun.hpp"
#include "specfun_detail.hpp"

namespace qsd::specfun {

namespace {

constexpr double kPi = std::numbers::pi;

// Lanczos approximation, g = 7, n = 9; about 15 digits for Re z >= 1/2.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

Complex log_gamma_right(Complex z) {
  z -= 1.0;
  Complex x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + double(i));
  const Complex t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// log sin(w) without overflow for large |Im w|:
// sin w = e^{-iw} (e^{2iw} - 1) / (2i), and |e^{2iw}| < 1 when Im w > 0.
Complex log_sin(Complex w) {
  if (w.imag() < 0.0) return std::conj(log_sin(std::conj(w)));
  const Complex i(0.0, 1.0);
  return -i * w + std::log((std::exp(2.0 * i * w) - 1.0) / (2.0 * i));
}

}  // namespace

Complex detail::log_gamma(Complex z) {
  if (z.real() < 0.5) return std::log(kPi) - log_sin(kPi * z) - log_gamma_right(1.0 - z);
  return log_gamma_right(z);
}

bool detail::is_nonpositive_integer(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::nearbyint(z.real());
}

Complex gamma(Complex z) {
  if (detail::is_nonpositive_integer(z)) {
    std::ostringstream msg;
    msg << "Gamma has a pole at z = " << z.real();
    throw PoleError("specfun", msg.str());
  }
  if (z.imag() == 0.0) return std::tgamma(z.real());
  if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * std::exp(log_gamma_right(1.0 - z)));
  return std::exp(log_gamma_right(z));
}

Complex rgamma(Complex z) {
  if (detail::is_nonpositive_integer(z)) return 0.0;
  if (z.imag() == 0.0) return 1.0 / std::tgamma(z.real());
  if (z.real() < 0.5) return std::sin(kPi * z) * std::exp(log_gamma_right(1.0 - z)) / kPi;
  return std::exp(-log_gamma_right(z));
}

Complex pochhammer(Complex z, int n) {
  if (n < 0) throw DomainError("specfun", "pochhammer requires n >= 0");
  if (detail::is_nonpositive_integer(z)) {
    const long k = std::lround(-z.real());
    if (n > k) return 0.0;
    // (-k)_n = (-1)^n k!/(k-n)!
    double v = 1.0;
    for (long j = k - n + 1; j <= k; ++j) v *= double(j);
    return (n % 2 == 0) ? v : -v;
  }
  Complex v = 1.0;
  for (int j = 0; j < n; ++j) v *= z + double(j);
  return v;
}

double collapse_to_real(Complex v, std::string_view what) {
  const double scale = 1.0 + std::abs(v);
  const double residue = std::abs(v.imag());
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw NonConvergenceError("specfun", std::string(what) + " evaluated to a non-finite value");
  }
  if (residue > kImagHardLimit * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " should be real but has imaginary part " << v.imag() << " (real part "
        << v.real() << ")";
    throw ImaginaryResidueError("specfun", msg.str());
  }
  return v.real();
}

bool detail::imag_residue_ok(Complex v) {
  return std::abs(v.imag()) <= kImagAtol * (1.0 + std::abs(v));
}

// OrderParam --------------------------------------------------------------

OrderParam OrderParam::real(double value) {
  if (!std::isfinite(value)) throw DomainError("specfun", "order must be finite");
  return OrderParam(Kind::Real, std::abs(value), std::signbit(value) && value != 0.0);
}

OrderParam OrderParam::imaginary(double value) {
  if (!std::isfinite(value)) throw DomainError("specfun", "order must be finite");
  if (value == 0.0) return OrderParam();
  return OrderParam(Kind::Imaginary, std::abs(value), value < 0.0);
}

OrderParam OrderParam::from_complex(Complex value) {
  if (value.imag() == 0.0) return real(value.real());
  if (value.real() == 0.0) return imaginary(value.imag());
  const double small = std::min(std::abs(value.real()), std::abs(value.imag()));
  if (small > 1e-12 * std::abs(value)) {
    throw DomainError("specfun", "order must be purely real or purely imaginary");
  }
  return std::abs(value.real()) >= std::abs(value.imag()) ? real(value.real())
                                                          : imaginary(value.imag());
}

Complex OrderParam::value() const noexcept {
  const double v = negative_ ? -magnitude_ : magnitude_;
  return kind_ == Kind::Real ? Complex(v, 0.0) : Complex(0.0, v);
}

OrderParam OrderParam::negated() const noexcept {
  if (magnitude_ == 0.0) return *this;
  return OrderParam(kind_, magnitude_, !negative_);
}

OrderParam OrderParam::scaled(double factor) const {
  const Complex v = value() * factor;
  return kind_ == Kind::Real ? real(v.real()) : imaginary(v.imag());
}

}  // namespace qsd::specfun
