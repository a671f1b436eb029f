#pragma once

namespace spiraldim {

// ln Gamma(x) for x > 0; DomainError otherwise.
double log_gamma(double x);

}  // namespace spiraldim
