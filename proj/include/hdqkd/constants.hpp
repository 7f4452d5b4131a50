#pragma once

namespace hdqkd {

// CODATA 2018 exact values (SI).
inline constexpr double kPlanck = 6.62607015e-34;       // J s
inline constexpr double kSpeedOfLight = 299792458.0;    // m/s
inline constexpr double kPlanckTimesC = kPlanck * kSpeedOfLight;  // J m

}  // namespace hdqkd
