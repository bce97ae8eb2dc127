#include "tvgp/units.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tvgp/errors.hpp"

namespace tvgp {

void UnitConstants::validate() const {
  if (!(r_sun_kpc > 0.0) || !(v0_kms > 0.0)) {
    throw DomainError("unit constants must be positive");
  }
}

double omega_bar(double s1_model, const UnitConstants& c) {
  c.validate();
  if (!(s1_model > 0.0)) {
    throw DomainError("radial model coordinate must be positive, got " + std::to_string(s1_model));
  }
  return c.v0_kms * s1_model / c.r_sun_kpc;
}

double s1_from_omega_bar(double omega_kms_kpc, const UnitConstants& c) {
  c.validate();
  if (!(omega_kms_kpc > 0.0)) throw DomainError("pattern speed must be positive");
  return omega_kms_kpc * c.r_sun_kpc / c.v0_kms;
}

double bar_angle_deg(double s2_model_rad) { return s2_model_rad * 180.0 / std::numbers::pi; }

HpdInterval omega_bar_interval(const HpdInterval& s1, const UnitConstants& c) {
  return {omega_bar(s1.lower, c), omega_bar(s1.upper, c), s1.mass};
}

HpdInterval bar_angle_interval(const HpdInterval& s2) {
  return {bar_angle_deg(s2.lower), bar_angle_deg(s2.upper), s2.mass};
}

}  // namespace tvgp
