#pragma once

namespace tripod {

// All user-facing frequencies are cyclic MHz; everything internal is
// angular rad/us. The factor of 2*pi is applied exactly once, at config
// ingestion, through these two helpers.
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

constexpr double mhz_to_rad(double f_mhz) { return kTwoPi * f_mhz; }
constexpr double rad_to_mhz(double w_rad) { return w_rad / kTwoPi; }

} // namespace tripod
