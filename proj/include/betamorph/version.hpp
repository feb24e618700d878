#pragma once

namespace betamorph::version {

inline constexpr const char* kArtifact = "1.0.0";
inline constexpr const char* kAlgebraicCore = "1.0.0";
inline constexpr const char* kBetaMaps = "1.0.0";
inline constexpr const char* kMonotonicity = "1.0.0";
inline constexpr const char* kMarkov = "1.0.0";
inline constexpr const char* kCli = "1.0.0";

}  // namespace betamorph::version
