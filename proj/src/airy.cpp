// SPDX-License-Identifier: Apache-2.0
#include "btspec/airy.hpp"

#include <cmath>
#include <stdexcept>

namespace btspec {

double airy_ai(double x) {
  // Ai(x) = c1 * f(x) + c2 * g(x) with
  //   f(x) = sum_k (3k)!_3 x^{3k} / (3k)!   (term_{k+1} = term_k * x^3 (3k+1)/((3k+3)!/(3k)!))
  //   g(x) = sum_k ... x^{3k+1}
  // Recurrences: f_{k+1} = f_k * x^3 / ((3k+2)(3k+3)),
  //              g_{k+1} = g_k * x^3 / ((3k+3)(3k+4)).
  const double c1 = 1.0 / (std::pow(3.0, 2.0 / 3.0) * std::tgamma(2.0 / 3.0));
  const double c2 = 1.0 / (std::pow(3.0, 1.0 / 3.0) * std::tgamma(1.0 / 3.0));
  const double x3 = x * x * x;
  double f = 1.0, g = x;
  double tf = 1.0, tg = x;
  for (int k = 0; k < 80; ++k) {
    tf *= x3 / ((3.0 * k + 2.0) * (3.0 * k + 3.0));
    tg *= x3 / ((3.0 * k + 3.0) * (3.0 * k + 4.0));
    f += tf;
    g += tg;
    if (std::abs(tf) + std::abs(tg) < 1e-18 * (std::abs(f) + std::abs(g)))
      break;
  }
  return c1 * f - c2 * g;
}

double airy_first_zero() {
  static const double zero = [] {
    double lo = -3.0, hi = -2.0;
    double flo = airy_ai(lo);
    if (flo * airy_ai(hi) >= 0.0)
      throw std::logic_error("airy_first_zero: no sign change on (-3,-2)");
    for (int i = 0; i < 200; ++i) {
      double mid = 0.5 * (lo + hi);
      double fm = airy_ai(mid);
      if (fm == 0.0)
        return mid;
      if (flo * fm < 0.0) {
        hi = mid;
      } else {
        lo = mid;
        flo = fm;
      }
      if (hi - lo < 1e-15)
        break;
    }
    return 0.5 * (lo + hi);
  }();
  return zero;
}

double airy_first_zero_abs() { return -airy_first_zero(); }

} // namespace btspec
