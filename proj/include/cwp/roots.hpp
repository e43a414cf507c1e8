#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "cwp/model.hpp"

namespace cwp {

// Bisection for a sign change of f on [lo, hi].  Iterates until the bracket is
// narrower than tol (absolute) or stops shrinking in floating point.  Throws
// SolverError when f(lo) and f(hi) have the same strict sign.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
              const std::string& what);

// Same, with the endpoint signs supplied by the caller (for brackets whose
// endpoints are singular, e.g. f -> +inf).  sign_lo is the sign of f near lo.
double bisect_with_signs(const std::function<double(double)>& f, double lo, double hi,
                         int sign_lo, double tol);

}  // namespace cwp
