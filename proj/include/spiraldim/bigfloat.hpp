#pragma once
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace spiraldim {

// Working precisions for log-domain arithmetic. Big50 is the default and
// already holds ~50 significant decimal digits; Big100 is selectable at
// runtime for headroom checks (--precision-digits / SPIRALDIM_PRECISION).
using Big50 = boost::multiprecision::cpp_bin_float_50;
using Big100 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<100>>;

}  // namespace spiraldim
