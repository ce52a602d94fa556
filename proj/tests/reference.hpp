#pragma once

// Frozen reference values computed with mpmath at 30+ significant digits,
// plus small independent oracles (naive series, Runge-Kutta) that share no
// code with the library.

#include <cmath>
#include <complex>
#include <functional>
#include <limits>

namespace ref {

using cplx = std::complex<double>;

inline constexpr double kCriticalA = 10.2404654391050035;

struct LambdaAt {
  double A;
  double lambda;
};
inline constexpr LambdaAt kLambda[] = {
    {0.05, 291.33005630741765},      {0.14, 48.743826697035562},
    {0.5, 6.4493762414223749},       {1.0, 2.3601652300232356},
    {2.0, 0.92211011585374111},      {5.0, 0.29091067189229352},
    {10.0, 0.12846121583707029},     {20.0, 0.058856148621839669},
    {50.0, 0.021861600949777675},    {200.0, 0.0051677725657882770},
    {500.0, 0.0020330664720907667},
};

inline constexpr double kNormalizerA5 = 0.3485966576861241171;
inline constexpr double kLaplaceA5S1 = 0.28024012087865623575;
inline constexpr double kLaplaceA500S1 = 0.14274227210345194;
inline constexpr double kStationaryLaplaceS1 = 0.13966747401529314;

struct WhittakerValue {
  double kappa;
  cplx mu;
  double z;
  double value;
};
inline const WhittakerValue kW[] = {
    {1.0, 0.25, 3.0, 0.62863972595605324377},
    {0.0, 0.25, 0.4, 0.66994714288397911644},
    {1.0, cplx(0.0, 0.7), 2.0, 0.50028107983395280249},
    {0.0, cplx(0.0, 1.3), 5.0, 0.058714925275160098686},
    {-1.0, 0.3, 1.0, 0.22674399779827104992},
    {0.5, 0.45, 20.0, 0.00020505174452457835511},
    {1.0, cplx(0.0, 2.5), 0.8, -0.0034263354253003326216},
};

inline constexpr double kM_m1_03_1 = 1.8276826888902280738;  // M_{-1,0.3}(1)
inline const cplx kM_1_07i_2{0.25385959965346542976, 0.99518690812124348674};
inline const cplx kI_05i_2{2.4904853295894434218, -0.07920683555109428028};
inline constexpr double kK_05i_2 = 0.10812833240911413378;
inline constexpr double kK_03_01 = 2.8050564750215722063;
inline constexpr double kK_22i_005 = 0.045656340613348074334;
inline const cplx kGamma_03_2i{0.05746533756958803346, -0.074984912582646138176};
inline const cplx kGamma_m25_05i{-0.3338752035224323374, -0.20645730796360841492};
inline constexpr double kHyp2f2 = 1.2028815038487640792;  // 2F2(0.3,-0.7;1.2,2.5;-3.1)
inline constexpr double kHyp1f1 = 4.6455999482101771388;  // 1F1(0.3;1.6;4.2)

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
inline double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

/// Classical RK4 for y'' = g(z) y from z0 to z1 in n steps.
inline std::pair<double, double> rk4_linear(const std::function<double(double)>& g, double z0,
                                            double y0, double dy0, double z1, int n) {
  const double h = (z1 - z0) / n;
  double z = z0, y = y0, v = dy0;
  for (int i = 0; i < n; ++i) {
    const double k1y = v, k1v = g(z) * y;
    const double k2y = v + 0.5 * h * k1v, k2v = g(z + 0.5 * h) * (y + 0.5 * h * k1y);
    const double k3y = v + 0.5 * h * k2v, k3v = g(z + 0.5 * h) * (y + 0.5 * h * k2y);
    const double k4y = v + h * k3v, k4v = g(z + h) * (y + h * k3y);
    y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    z += h;
  }
  return {y, v};
}

/// Whittaker equation coefficient: W'' = (1/4 - kappa/z + (mu^2 - 1/4)/z^2) W.
inline std::function<double(double)> whittaker_coeff(double kappa, double mu) {
  return [=](double z) { return 0.25 - kappa / z + (mu * mu - 0.25) / (z * z); };
}

/// Direct summation of 1F1 in long double.
inline long double naive_1f1(long double a, long double b, long double z) {
  long double term = 1, sum = 1;
  for (int n = 0; n < 2000; ++n) {
    term *= (a + n) / (b + n) * z / (n + 1);
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace ref
