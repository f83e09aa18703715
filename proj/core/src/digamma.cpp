#include "tsinfo/digamma.hpp"

#include <cmath>
#include <string>

#include "tsinfo/error.hpp"

namespace tsinfo {

// Recurrence psi(x) = psi(x+1) - 1/x until x >= 10, then the asymptotic
// expansion in 1/x^2 with Bernoulli coefficients through B12. Truncation
// error at x = 10 is below 1e-15.
double digamma(double x) {
  if (!(x > 0.0)) {
    throw Error(Errc::DomainError, "digamma requires x > 0, got " + std::to_string(x));
  }
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // - B_{2n} / (2n x^{2n}), n = 1..6
  const double series =
      inv2 * (1.0 / 12.0 +
              inv2 * (-1.0 / 120.0 +
                      inv2 * (1.0 / 252.0 +
                              inv2 * (-1.0 / 240.0 +
                                      inv2 * (1.0 / 132.0 +
                                              inv2 * (-691.0 / 32760.0))))));
  result += std::log(x) - 0.5 * inv - series;
  return result;
}

}  // namespace tsinfo
