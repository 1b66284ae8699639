// constants.hpp: Physical and mathematical constants shared by all modules

#pragma once

namespace qbm {

inline constexpr double hbar_si = 1.054571817e-34;   // J s
inline constexpr double boltzmann_si = 1.380649e-23; // J / K
inline constexpr double euler_gamma = 0.5772156649015329;
inline constexpr double pi = 3.141592653589793;

} // namespace qbm
