#pragma once

namespace faultflow::units {

inline constexpr double millidarcy = 9.869233e-16;  // m^2
inline constexpr double kilopascal = 1.0e3;         // Pa
inline constexpr double bar = 1.0e5;                // Pa
inline constexpr double day = 86400.0;              // s
inline constexpr double year = 365.25 * day;        // s
inline constexpr double tonne = 1.0e3;              // kg
inline constexpr double gravity = 9.80665;          // m/s^2

}  // namespace faultflow::units
