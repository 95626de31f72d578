// units.hpp — Unit conventions
//
// Energies and rates are in meV with hbar = 1. Times are therefore measured in
// hbar/meV; conversion to picoseconds is explicit and never applied implicitly.

#pragma once

namespace xblockade::units {

/// 1 hbar/meV expressed in picoseconds.
inline constexpr double kHbarPerMeVInPs = 0.6582119569;

/// hbar * c in meV * m.
inline constexpr double kHbarCInMeVMetre = 1.973269804593025e-4;

constexpr double to_picoseconds(double tau_hbar_per_mev) noexcept
{
    return tau_hbar_per_mev * kHbarPerMeVInPs;
}

constexpr double from_picoseconds(double tau_ps) noexcept
{
    return tau_ps / kHbarPerMeVInPs;
}

} // namespace xblockade::units
