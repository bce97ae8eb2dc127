#pragma once

#include "tvgp/analysis.hpp"

namespace tvgp {

/// Galactic scale constants used to convert model-unit solar coordinates.
struct UnitConstants {
  double r_sun_kpc = 8.0;  // galactocentric radius of the Sun
  double v0_kms = 220.0;   // circular speed

  void validate() const;
};

/// Bar pattern speed in km/s/kpc. One model length unit is r_sun / s1 kpc,
/// and Omega_bar = v0 / (one model unit), i.e. v0 * s1 / r_sun.
double omega_bar(double s1_model, const UnitConstants& c = {});

/// Inverse of omega_bar.
double s1_from_omega_bar(double omega_kms_kpc, const UnitConstants& c = {});

/// Sun / bar long-axis angle in degrees.
double bar_angle_deg(double s2_model_rad);

/// Both maps are increasing, so intervals convert endpoint by endpoint.
HpdInterval omega_bar_interval(const HpdInterval& s1, const UnitConstants& c = {});
HpdInterval bar_angle_interval(const HpdInterval& s2);

}  // namespace tvgp
