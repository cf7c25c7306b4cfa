#pragma once

// Reference values computed independently with scipy.stats (friedmanchisquare,
// chi2.sf, t.ppf) and pasted here as literals.

#include <vector>

namespace fixtures {

/// Times (s) of 22 players rounding first base by three methods (Woodward's
/// base-running data, the textbook Friedman example).
inline std::vector<std::vector<double>> base_running() {
    return {{5.40, 5.50, 5.55}, {5.85, 5.70, 5.75}, {5.20, 5.60, 5.50}, {5.55, 5.50, 5.40}, {5.90, 5.85, 5.70},
            {5.45, 5.55, 5.60}, {5.40, 5.40, 5.35}, {5.45, 5.50, 5.35}, {5.25, 5.15, 5.00}, {5.85, 5.80, 5.70},
            {5.25, 5.20, 5.10}, {5.65, 5.55, 5.45}, {5.60, 5.35, 5.45}, {5.05, 5.00, 4.95}, {5.50, 5.50, 5.40},
            {5.45, 5.55, 5.50}, {5.55, 5.55, 5.35}, {5.45, 5.50, 5.55}, {5.50, 5.45, 5.25}, {5.65, 5.60, 5.40},
            {5.70, 5.65, 5.55}, {6.30, 6.30, 6.25}};
}
inline constexpr double kBaseRunningChi2 = 11.142857142857132;
inline constexpr double kBaseRunningP = 0.003805040775511383;

inline std::vector<std::vector<double>> tied_matrix() {
    return {{1, 1, 2}, {3, 1, 1}, {2, 2, 2.5}, {0, 1, 0}, {5, 4, 4}};
}
inline constexpr double kTiedChi2 = 0.4000000000000057;
inline constexpr double kTiedP = 0.8187307530779795;

/// chi2.sf(11.453, 3)
inline constexpr double kChi2Sf = 0.009512361724153246;

/// 95% t interval of {1, 2, 3, 4}.
inline constexpr double kCiLo = 0.445739743239121;
inline constexpr double kCiHi = 4.5542602567608785;

}  // namespace fixtures
