#pragma once

#include "momentous/dynamics.hpp"

namespace momentous {

/// Which value to use for the initial third momentum moment G^{0,3}.
enum class ThirdMomentConvention {
  Paper,  // -hbar^2 p0 / sigma0^2
  Zero,   // symmetric momentum distribution
};

/// Minimum-uncertainty Gaussian wavepacket centred at (q0, p0) with position spread sigma0.
struct GaussianPacket {
  double q0 = 0.0;
  double p0 = 0.0;
  double sigma0 = 0.5;
  double hbar = 1.0;

  /// Throws InvalidArgument unless sigma0 > 0 and hbar > 0.
  void validate() const;
};

/// Initial moments of the packet at t = 0 for truncation order 0, 2 or 3.
///
/// G^{2,0} = sigma0^2, G^{1,1} = 0, G^{0,2} = (hbar / 2 sigma0)^2; at order 3 also
/// G^{3,0} = G^{2,1} = G^{1,2} = 0 and G^{0,3} per `convention`. Order 0 carries q0, p0 only.
/// Throws InvalidOrder for any other order.
MomentState initial_moments(const GaussianPacket& packet, int order,
                            ThirdMomentConvention convention = ThirdMomentConvention::Paper);

}  // namespace momentous
