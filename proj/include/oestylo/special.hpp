#pragma once

namespace oestylo::special {

// Regularized lower/upper incomplete gamma P(a, x), Q(a, x) for a > 0, x >= 0.
// The power series is used for x < a + 1 and the Lentz continued fraction
// otherwise; the complementary function is formed by subtraction only on the
// side where it is at least ~0.3, so both tails keep full relative accuracy.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b) for a, b > 0, x in [0, 1].
// Continued fraction evaluated directly when x < (a + 1) / (a + b + 2),
// via the reflection I_x(a, b) = 1 - I_{1-x}(b, a) otherwise.
double beta_i(double a, double b, double x);

}  // namespace oestylo::special
