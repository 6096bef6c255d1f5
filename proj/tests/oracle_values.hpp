#pragma once

// Generated by tools/oracles/full_chain.py; do not edit by hand.

#include <array>

namespace oracle {

inline constexpr std::array kTimes{0.5, 1.0, 3.0};
inline constexpr std::array kM2{0.086771902575497866757, 0.17073647375586559084, 0.45755428622892014925};
inline constexpr std::array kM3{0.069082572843085265903, 0.14373885997481316983, 0.44021213358981947195};
inline constexpr std::array kM4Sparse{0.050293509328987645643, 0.10526638229716344666, 0.34264360563772752855};
inline constexpr std::array kTwoSidedM5{0.085013624761376921465, 0.1735277827323451264, 0.50473923823344959395};
inline constexpr std::array kOneSidedM6{0.10160834283207899861, 0.20216603528115248674, 0.54489776377961463386};
inline constexpr std::array kBass{0.11484391592572290061};
inline constexpr std::array kF1d{0.11250258662498461461};
inline constexpr std::array kM2SpecialHetHom{0.10706389340084686856, 0.10335671452575415457};
inline constexpr std::array kM2Equal{0.099396171614219960917, 0.099396171614219960917};

}  // namespace oracle
