#pragma once

namespace d2match {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kArtifactName = "d2match";

}  // namespace d2match
