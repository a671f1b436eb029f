#pragma once

namespace spiraldim {
inline constexpr const char* kVersion = "0.1.0";
}
