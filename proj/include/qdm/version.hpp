#pragma once

namespace qdm {

inline constexpr const char* kToolName = "qdmgate";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace qdm
