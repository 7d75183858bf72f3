#pragma once

#include <array>
#include <cstdint>

#include "flowgraph/energy_system.hpp"

namespace flowgraph {

/// Horizons of the six tri-area instances (hours): one month up to four years.
inline constexpr std::array<int, 6> kInstanceHorizons = {672, 4032, 8760, 17520, 26280, 35040};

/// Horizon of instance 1..6; throws InvariantViolation otherwise.
int instance_horizon(int instance);

struct CaseSpec {
  std::uint64_t seed = 1;
  int instance = 1;
};

/// PV plant and battery behind one grid connection point feeding a demand:
/// pv -> bt, pv -> ed, bt -> ed, with hub "cp" over all three and the route
/// ed -> bt forbidden. 24 hourly profiles, zero costs.
EnergySystem hybrid_fixture();

/// The hybrid fixture with operating costs 1 on pv flows and 2 on bt -> ed.
EnergySystem hybrid_costed();

/// Two-hour hybrid with hand-checkable data: D = (50, 60), PV availability
/// (1.0, 0.2) of 100 MW, battery 50 MW / 100 MWh starting at 40 MWh, lossless,
/// costs as in `hybrid_costed`. Optimum 150.
EnergySystem hybrid_two_step();

/// Three-area multi-carrier system (electricity, gas, heat, hydrogen) with
/// profiles generated from `spec.seed` at the horizon of `spec.instance`.
EnergySystem tri_area_case(const CaseSpec& spec);

/// Same system with every profile tiled or truncated to exactly `horizon`
/// values.
EnergySystem scale_horizon(const EnergySystem& system, int horizon);

/// Deterministic profile generators: a 64-bit linear congruential recurrence
/// mapped to [0,1], and a daily sinusoid plus recurrence noise for demand.
class Lcg {
 public:
  explicit Lcg(std::uint64_t seed) : state_(seed * 0x9E3779B97F4A7C15ULL + 1) {}
  double next();  // uniform in [0,1)

 private:
  std::uint64_t state_;
};

}  // namespace flowgraph
