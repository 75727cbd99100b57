#pragma once

// Test-only reference for the spectral chord-affinity table.  Works entirely
// in real trigonometric sums over the folded half-spectrum, so it shares no
// code path with the complex-transform implementation it checks.

#include <algorithm>
#include <array>
#include <cmath>

namespace reference {

inline constexpr double kPi = 3.14159265358979323846;

// Membership signal per quality: intervals of the triad above its root.
inline std::array<int, 3> quality_intervals(int quality) {
  switch (quality) {
    case 0: return {0, 4, 7};   // major
    case 1: return {0, 3, 7};   // minor
    default: return {0, 3, 6};  // diminished
  }
}

// Smoothed membership value at pitch-class interval l after keeping the K
// lowest-frequency components, evaluated as
//   g[l] = (1/12) [ G0 + 2 sum_{m=1}^{5} keep(m) (Re Gm cos + Im Gm (-sin))
//                   + keep(6) G6 cos(pi l) ]
inline double smooth_membership(int quality, int l, int K) {
  const auto tones = quality_intervals(quality);
  const int half = K / 2;
  auto kept = [half](int m) { return m <= half || m >= 12 - half; };

  double value = 3.0;  // G[0] = number of chord tones
  for (int m = 1; m <= 5; ++m) {
    if (!kept(m)) continue;
    double re = 0.0, im = 0.0;
    for (int t : tones) {
      re += std::cos(2.0 * kPi * m * t / 12.0);
      im -= std::sin(2.0 * kPi * m * t / 12.0);
    }
    value += 2.0 * (re * std::cos(2.0 * kPi * m * l / 12.0) -
                    im * std::sin(2.0 * kPi * m * l / 12.0));
  }
  if (kept(6)) {
    double g6 = 0.0;
    for (int t : tones) g6 += std::cos(kPi * t);  // e^{-i pi t} is real
    value += g6 * std::cos(kPi * l);
  }
  return std::clamp(value / 12.0, 0.0, 1.0);
}

inline double fit(int quality, int pc_interval, int K) {
  return 1.0 + 2.0 * smooth_membership(quality, pc_interval, K);
}

}  // namespace reference
