#include "cwp/roots.hpp"

#include <sstream>

namespace cwp {

double bisect_with_signs(const std::function<double(double)>& f, double lo, double hi,
                         int sign_lo, double tol) {
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol || mid <= lo || mid >= hi) return mid;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (sign_lo > 0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
              const std::string& what) {
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::isnan(flo) || std::isnan(fhi) || (flo > 0.0) == (fhi > 0.0)) {
    std::ostringstream os;
    os << what << ": no sign change on [" << lo << ", " << hi << "] (f(lo)=" << flo
       << ", f(hi)=" << fhi << ")";
    throw SolverError(os.str());
  }
  return bisect_with_signs(f, lo, hi, flo > 0.0 ? 1 : -1, tol);
}

}  // namespace cwp
