#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace flowgraph {

/// The four ways of assembling the same system: building blocks / flow
/// variables per link.
enum class Approach { ThreeBB4F, TwoBB2F, TwoBB1F, OneBB1F };

inline constexpr std::array<Approach, 4> kAllApproaches = {
    Approach::ThreeBB4F, Approach::TwoBB2F, Approach::TwoBB1F, Approach::OneBB1F};

std::string_view to_string(Approach approach) noexcept;

/// Accepts "3BB-4F", "2BB-2F", "2BB-1F", "1BB-1F" (case-insensitive).
std::optional<Approach> parse_approach(std::string_view text) noexcept;

}  // namespace flowgraph
