#include "momentous/packet.hpp"

#include <cmath>
#include <string>

#include "momentous/error.hpp"

namespace momentous {

void GaussianPacket::validate() const {
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0)) {
    throw InvalidArgument("packet: sigma0 must be positive, got " + std::to_string(sigma0));
  }
  if (!(hbar > 0.0) || !std::isfinite(hbar)) {
    throw InvalidArgument("packet: hbar must be positive, got " + std::to_string(hbar));
  }
  if (!std::isfinite(q0) || !std::isfinite(p0)) throw InvalidArgument("packet: q0 and p0 must be finite");
}

MomentState initial_moments(const GaussianPacket& packet, int order, ThirdMomentConvention convention) {
  if (order != 0 && order != 2 && order != 3) {
    throw InvalidOrder("packet: order must be 0, 2 or 3, got " + std::to_string(order));
  }
  packet.validate();
  MomentState s(order, 0.0, packet.q0, packet.p0);
  if (order == 0) return s;

  const double width = packet.hbar / (2.0 * packet.sigma0);
  s.set_g(2, 0, packet.sigma0 * packet.sigma0);
  s.set_g(1, 1, 0.0);
  s.set_g(0, 2, width * width);
  if (order == 3) {
    s.set_g(3, 0, 0.0);
    s.set_g(2, 1, 0.0);
    s.set_g(1, 2, 0.0);
    const double g03 = convention == ThirdMomentConvention::Paper
                           ? -packet.hbar * packet.hbar * packet.p0 / (packet.sigma0 * packet.sigma0)
                           : 0.0;
    s.set_g(0, 3, g03);
  }
  return s;
}

}  // namespace momentous
