#pragma once

// Special functions needed by the quasi-stationary distribution formulas:
// Gamma and Pochhammer, 2F2 and Kummer 1F1, Whittaker M and W, modified
// Bessel I and K (real or imaginary order), the bivariate Kampe de Feriet
// series F^{0:2;1}_{2:0;0}, and incomplete Weber-type integrals.
//
// Orders that are purely imaginary are carried through complex arithmetic
// and collapsed back to real numbers only where the result is known to be
// real; see `collapse_to_real`.

#include <complex>
#include <string_view>

namespace qsd::specfun {

using Complex = std::complex<double>;

/// A number known to be either purely real or purely imaginary, such as
/// xi(lambda) = sqrt(1 - 8 lambda) or half of it.  The sign is kept so that
/// the evenness of W and K in their order can be exercised directly.
class OrderParam {
 public:
  enum class Kind { Real, Imaginary };

  OrderParam() = default;

  static OrderParam real(double value);
  /// `value` is the coefficient of i; zero yields a Real order.
  static OrderParam imaginary(double value);
  /// Accepts a complex number with (numerically) zero real or imaginary part.
  static OrderParam from_complex(Complex value);

  Kind kind() const noexcept { return kind_; }
  double magnitude() const noexcept { return magnitude_; }
  int sign() const noexcept { return negative_ ? -1 : 1; }
  bool is_real() const noexcept { return kind_ == Kind::Real; }

  Complex value() const noexcept;
  OrderParam negated() const noexcept;
  OrderParam scaled(double factor) const;

  friend bool operator==(const OrderParam&, const OrderParam&) = default;

 private:
  OrderParam(Kind kind, double magnitude, bool negative)
      : kind_(kind), magnitude_(magnitude), negative_(negative) {}

  Kind kind_ = Kind::Real;
  double magnitude_ = 0.0;
  bool negative_ = false;
};

/// Truncation policy for power and double series.  A series stops once three
/// consecutive terms fall below rel_tol * |partial sum|.  `rounding_tol`
/// bounds the tolerated loss of significance: when the largest term exceeds
/// the sum by so much that rounding alone could exceed rounding_tol * |sum|,
/// the evaluation is reported as non-convergent instead of returning noise.
struct SeriesControl {
  double rel_tol = 1e-14;
  int max_terms = 20000;
  double rounding_tol = 1e-9;
};

/// Value plus an absolute error estimate.
struct Evaluation {
  Complex value;
  double abs_err = 0.0;
};

inline constexpr double kImagAtol = 1e-10;
inline constexpr double kImagHardLimit = 1e-6;

/// Returns Re(v) when |Im v| <= kImagAtol * (1 + |v|); throws
/// ImaginaryResidueError when the residue exceeds kImagHardLimit * (1 + |v|).
/// Residues in between are dropped silently.
double collapse_to_real(Complex v, std::string_view what);

// Gamma family ------------------------------------------------------------

Complex gamma(Complex z);
/// 1/Gamma(z), entire: exactly zero at the poles of Gamma.
Complex rgamma(Complex z);
/// Rising factorial (z)_n.  Nonpositive integer z = -k uses the exact
/// terminating form (-1)^n k!/(k-n)! for n <= k and 0 beyond.
Complex pochhammer(Complex z, int n);

// Hypergeometric series ---------------------------------------------------

Evaluation hyp2f2_eval(Complex a1, Complex a2, Complex b1, Complex b2, Complex z,
                       const SeriesControl& ctl = {});
Complex hyp2f2(Complex a1, Complex a2, Complex b1, Complex b2, Complex z,
               const SeriesControl& ctl = {});

/// Kummer's M(a, b, z) = 1F1(a; b; z).
Complex hyp1f1(Complex a, Complex b, double z, const SeriesControl& ctl = {});

/// F^{0:2;1}_{2:0;0}[-; a1, a2; 1 | b1, b2; -; - | u, v]
///   = sum_{i,j} (a1)_i (a2)_i / ((b1)_{i+j} (b2)_{i+j}) u^i v^j / i!
/// The tail of the row sum over i is bounded geometrically once the row ratio
/// drops below 1/2; the reported error is that bound plus rounding.
Evaluation kampe_de_feriet_eval(Complex a1, Complex a2, Complex b1, Complex b2, double u, double v,
                                const SeriesControl& ctl = {});
double kampe_de_feriet(Complex a1, Complex a2, Complex b1, Complex b2, double u, double v,
                       const SeriesControl& ctl = {});

// Whittaker functions -----------------------------------------------------

/// M_{kappa,mu}(z) for z > 0.  Complex in general (z^{1/2+mu} with imaginary mu).
Complex whittaker_m(double kappa, Complex mu, double z);
Complex whittaker_m(double a, const OrderParam& b, double z);

enum class WhittakerRoute { Automatic, Asymptotic, Connection, Integral };

/// W_{kappa,mu}(z) for real kappa, z > 0.  Even in mu by construction: mu is
/// replaced by the member of {mu, -mu} with nonnegative real part (or
/// nonnegative imaginary part when purely imaginary) before evaluation.
Complex whittaker_w(double kappa, Complex mu, double z,
                    WhittakerRoute route = WhittakerRoute::Automatic);
double whittaker_w(double a, const OrderParam& b, double z);
/// e^{z/2} W_{a,b}(z); stays representable for z in the hundreds.
double whittaker_w_scaled(double a, const OrderParam& b, double z);
Evaluation whittaker_w_scaled_eval(double kappa, Complex mu, double z,
                                   WhittakerRoute route = WhittakerRoute::Automatic);

// Modified Bessel functions -----------------------------------------------

Complex bessel_i(Complex order, double z);
/// e^{-z} I_order(z)
Complex bessel_i_scaled(Complex order, double z);
Complex bessel_k(Complex order, double z);
/// e^{z} K_order(z)
Complex bessel_k_scaled(Complex order, double z);

/// I is complex for imaginary order; K is real for real or imaginary order.
Complex bessel_i(const OrderParam& order, double z);
double bessel_k(const OrderParam& order, double z);

// Incomplete Weber integrals ----------------------------------------------

enum class BesselKind { I, K };
enum class QuadratureRule { GaussKronrod, DoubleExponential };

/// int_u^inf exp(-(A/8) x^2) C_order(x) x^{-2} dx with C in {I, K}.
/// Complex because I of imaginary order is; the K version is real.
Evaluation weber_incomplete_eval(BesselKind kind, double u, double A, Complex order,
                                 QuadratureRule rule = QuadratureRule::GaussKronrod);
Complex weber_incomplete(BesselKind kind, double u, double A, const OrderParam& order,
                         QuadratureRule rule = QuadratureRule::GaussKronrod);

}  // namespace qsd::specfun
