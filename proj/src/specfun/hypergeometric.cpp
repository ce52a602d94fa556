#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "qsd/errors.hpp"
#include "qsd/specfun.hpp"
#include "specfun_detail.hpp"

namespace qsd::specfun {

using detail::kModule;

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::optional<long> terminating_index(Complex a) {
  if (detail::is_nonpositive_integer(a)) return std::lround(-a.real());
  return std::nullopt;
}

// Smallest n such that a numerator kills every term from n+1 on.
std::optional<long> termination(std::initializer_list<Complex> numerators) {
  std::optional<long> n;
  for (Complex a : numerators) {
    if (auto k = terminating_index(a)) n = n ? std::min(*n, *k) : *k;
  }
  return n;
}

// A denominator (b)_k vanishes for k > -b; that is harmless only when the
// series has already terminated.
void check_denominators(std::initializer_list<Complex> denominators, std::optional<long> stop,
                        std::string_view fn) {
  for (Complex b : denominators) {
    if (!detail::is_nonpositive_integer(b)) continue;
    const long pole_from = std::lround(-b.real()) + 1;
    if (!stop || *stop >= pole_from) {
      std::ostringstream msg;
      msg << fn << ": denominator parameter " << b.real() << " is a nonpositive integer";
      throw DenominatorPoleError(kModule, msg.str());
    }
  }
}

void check_rounding(double max_term, double sum_abs, const SeriesControl& ctl,
                    std::string_view fn) {
  if (max_term * kEps * 4.0 > ctl.rounding_tol * sum_abs) {
    std::ostringstream msg;
    msg << fn << ": cancellation in the series (largest term " << max_term << ", sum " << sum_abs
        << ") leaves fewer digits than requested";
    throw NonConvergenceError(kModule, msg.str());
  }
}

// Generic single power series whose term ratio is given by `ratio(k)`:
// term_{k+1} = term_k * ratio(k).
template <class Ratio>
Evaluation sum_series(Ratio&& ratio, std::optional<long> stop, const SeriesControl& ctl,
                      std::string_view fn) {
  Complex term = 1.0;
  Complex sum = 1.0;
  double max_term = 1.0;
  if (stop) {
    for (long k = 0; k < *stop; ++k) {
      term *= ratio(k);
      sum += term;
      max_term = std::max(max_term, std::abs(term));
    }
    return {sum, kEps * max_term * double(*stop + 1)};
  }
  int small = 0;
  for (long k = 0; k < ctl.max_terms; ++k) {
    term *= ratio(k);
    sum += term;
    const double mag = std::abs(term);
    max_term = std::max(max_term, mag);
    if (mag <= ctl.rel_tol * std::abs(sum)) {
      if (++small >= 3) {
        check_rounding(max_term, std::abs(sum), ctl, fn);
        return {sum, 3.0 * mag + kEps * max_term * double(k + 1)};
      }
    } else {
      small = 0;
    }
  }
  std::ostringstream msg;
  msg << fn << ": no convergence within " << ctl.max_terms << " terms";
  throw NonConvergenceError(kModule, msg.str());
}

}  // namespace

Evaluation hyp2f2_eval(Complex a1, Complex a2, Complex b1, Complex b2, Complex z,
                       const SeriesControl& ctl) {
  const auto stop = termination({a1, a2});
  check_denominators({b1, b2}, stop, "hyp2f2");
  auto ratio = [&](long k) {
    const double kk = double(k);
    return (a1 + kk) * (a2 + kk) / ((b1 + kk) * (b2 + kk) * (kk + 1.0)) * z;
  };
  return sum_series(ratio, stop, ctl, "hyp2f2");
}

Complex hyp2f2(Complex a1, Complex a2, Complex b1, Complex b2, Complex z,
               const SeriesControl& ctl) {
  return hyp2f2_eval(a1, a2, b1, b2, z, ctl).value;
}

Complex hyp1f1(Complex a, Complex b, double z, const SeriesControl& ctl) {
  const auto stop = termination({a});
  check_denominators({b}, stop, "hyp1f1");
  auto ratio = [&](long k) {
    const double kk = double(k);
    return (a + kk) / ((b + kk) * (kk + 1.0)) * z;
  };
  return sum_series(ratio, stop, ctl, "hyp1f1").value;
}

Evaluation kampe_de_feriet_eval(Complex a1, Complex a2, Complex b1, Complex b2, double u, double v,
                                const SeriesControl& ctl) {
  const auto stop = termination({a1, a2});
  if (detail::is_nonpositive_integer(b1) || detail::is_nonpositive_integer(b2)) {
    // (b)_{i+j} vanishes for some j in every row, so no termination in i helps
    throw DenominatorPoleError(kModule, "kampe_de_feriet: denominator parameter is a nonpositive integer");
  }
  if (!std::isfinite(u) || !std::isfinite(v)) {
    throw DomainError(kModule, "kampe_de_feriet: arguments must be finite");
  }

  // Row i: head_i * sum_j v^j / ((b1+i)_j (b2+i)_j), with
  // head_i = (a1)_i (a2)_i u^i / (i! (b1)_i (b2)_i).
  auto row_sum = [&](long i, Complex head, double& abs_sum, double& max_term) -> Complex {
    const Complex c1 = b1 + double(i);
    const Complex c2 = b2 + double(i);
    Complex term = head;
    Complex sum = head;
    abs_sum = std::abs(head);
    max_term = std::max(max_term, abs_sum);
    int small = 0;
    for (long j = 0; j < ctl.max_terms; ++j) {
      term *= v / ((c1 + double(j)) * (c2 + double(j)));
      sum += term;
      const double mag = std::abs(term);
      abs_sum += mag;
      max_term = std::max(max_term, mag);
      // the row magnitude is compared with the head so that a row whose sum
      // cancels to zero still terminates
      if (mag <= ctl.rel_tol * std::max(std::abs(sum), std::abs(head)) || mag == 0.0) {
        if (++small >= 3) return sum;
      } else {
        small = 0;
      }
    }
    throw NonConvergenceError(kModule, "kampe_de_feriet: inner series did not converge");
  };

  Complex total = 0.0;
  Complex head = 1.0;
  double max_term = 0.0;
  double tail_bound = std::numeric_limits<double>::infinity();
  int small_rows = 0;
  const long last_row = stop ? *stop : long(ctl.max_terms) - 1;
  for (long i = 0; i <= last_row; ++i) {
    double abs_row = 0.0;
    const Complex row = row_sum(i, head, abs_row, max_term);
    total += row;
    if (stop && i == *stop) {
      tail_bound = 0.0;
      break;
    }
    const double di = double(i);
    const double head_abs = std::abs(head);
    head *= (a1 + di) * (a2 + di) / ((b1 + di) * (b2 + di) * (di + 1.0)) * u;

    // Geometric bound on the rows after this one.  Once Re(b + i) > 0 the
    // inner sums shrink with i, so |row_k| <= |head_k| * abs_row / |head_i|,
    // and |head_{k+1} / head_k| <= rho for every k > i.
    const double re1 = b1.real() + di + 1.0;
    const double re2 = b2.real() + di + 1.0;
    if (head == 0.0) {
      tail_bound = 0.0;
    } else if (re1 > 1.0 && re2 > 1.0 && head_abs > 0.0) {
      const double g1 = std::max(1.0, (std::abs(a1) + di + 1.0) / re1);
      const double g2 = std::max(1.0, (std::abs(a2) + di + 1.0) / re2);
      const double rho = std::abs(u) * g1 * g2 / (di + 2.0);
      if (rho < 0.5) tail_bound = std::abs(head) * (abs_row / head_abs) / (1.0 - rho);
    }
    const double scale = std::abs(total);
    if (std::abs(row) <= ctl.rel_tol * scale || abs_row == 0.0) {
      ++small_rows;
    } else {
      small_rows = 0;
    }
    if (small_rows >= 3 && tail_bound <= ctl.rel_tol * scale) break;
    if (head == 0.0) break;
    if (i == last_row) {
      throw NonConvergenceError(kModule, "kampe_de_feriet: outer series did not converge");
    }
  }
  check_rounding(max_term, std::abs(total), ctl, "kampe_de_feriet");
  return {total, tail_bound + 8.0 * kEps * max_term};
}

double kampe_de_feriet(Complex a1, Complex a2, Complex b1, Complex b2, double u, double v,
                       const SeriesControl& ctl) {
  return collapse_to_real(kampe_de_feriet_eval(a1, a2, b1, b2, u, v, ctl).value,
                          "kampe_de_feriet");
}

}  // namespace qsd::specfun
