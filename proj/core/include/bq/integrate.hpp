#pragma once

#include <functional>
#include <vector>

namespace bq {

// Globally adaptive Gauss–Kronrod (7/15-point) quadrature of f over [a, b]
// to absolute tolerance tol. Interior breakpoints (kinks) split the range
// first. The tolerance is floored at the roundoff level of the integrand's
// L1 norm. Throws bq::Error when the interval budget runs out before then.
[[nodiscard]] double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                                        double tol, const std::vector<double>& breakpoints = {},
                                        unsigned max_intervals = 4000);

}  // namespace bq
