#pragma once
#include <stdexcept>
#include <string>

namespace spiraldim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the documented domain of an operation.
struct DomainError : Error { using Error::Error; };

// Iteration budget exhausted before the tolerance was met.
struct NonConvergence : Error { using Error::Error; };

// Root solver was given endpoints whose function values do not bracket zero.
struct BadBracket : Error { using Error::Error; };

// Adaptive step size collapsed below the floor; callers near a singular
// point must stop integration at a configured inner radius instead.
struct StepUnderflow : Error { using Error::Error; };

// Log-domain subtraction of near-equal magnitudes would silently consume
// the whole precision budget; surfaced instead of returning garbage.
struct CancellationError : Error { using Error::Error; };

// Sector estimator: requested eps leaves no resolved tail (critical index
// would be non-positive); eps must shrink before the estimate means anything.
struct EpsilonTooLarge : Error { using Error::Error; };

// Box counter would exceed its cell budget at this eps.
struct MemoryBudget : Error {
  double suggested_eps;
  MemoryBudget(const std::string& msg, double eps_hint)
      : Error(msg), suggested_eps(eps_hint) {}
};

// Fit window holds fewer than the minimum number of count entries.
struct WindowTooNarrow : Error { using Error::Error; };

// Adaptive sampler hit its point budget before reaching target density.
struct BudgetExceeded : Error { using Error::Error; };

// Lienard model has no even coefficient: entry-exit codimension is not finite.
struct InfiniteCodimension : Error { using Error::Error; };

// F vanished inside a slow divergence integral: the level lies outside the
// model's validity interval.
struct FZero : Error { using Error::Error; };

// Entry-exit recursion could not bracket the next level; carries how many
// levels were produced before the failure.
struct BracketFailure : Error {
  int levels_reached;
  BracketFailure(const std::string& msg, int reached)
      : Error(msg), levels_reached(reached) {}
};

// Malformed model/config/CSV input.
struct ParseError : Error { using Error::Error; };

// Filesystem failure (open/read/write).
struct IoError : Error { using Error::Error; };

}  // namespace spiraldim
