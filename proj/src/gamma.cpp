#include "spiraldim/gamma.hpp"

#include <cmath>

#include "spiraldim/errors.hpp"

namespace spiraldim {

double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma: requires x > 0");
  // std::lgamma is accurate to a few ulp for positive arguments; the sign
  // is +1 on x > 0 so the global signgam state is irrelevant here.
  return std::lgamma(x);
}

}  // namespace spiraldim
