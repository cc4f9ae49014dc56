#include "tubesim/aero.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tubesim {

void AeroConfig::validate() const {
  if (!(reference_area > 0.0) || !(fin_area > 0.0) || !(fin_span > 0.0)) {
    throw std::invalid_argument("aero areas and spans must be > 0");
  }
  if (!(air_density > 0.0)) throw std::invalid_argument("air_density must be > 0");
  if (body_drag_coeff_nosecone <= 0.0 || body_drag_coeff_bluff <= 0.0) {
    throw std::invalid_argument("drag coefficients must be > 0");
  }
  const double ratio = body_drag_coeff_nosecone / body_drag_coeff_bluff;
  if (ratio < 0.45 || ratio > 0.55) {
    throw std::invalid_argument(
        "nosecone drag coefficient must be ~50% of the bluff value");
  }
  if (!(stall_angle > 0.0 && stall_angle < M_PI_2)) {
    throw std::invalid_argument("stall_angle must be in (0, pi/2)");
  }
  if (yaw_damping_coeff < 0.0 || deployed_extra_area < 0.0 ||
      autorotation_coeff < 0.0) {
    throw std::invalid_argument("damping/area terms must be >= 0");
  }
}

namespace {

double body_weight(const AeroConfig& aero) {
  return aero.reference_area * aero.body_normal_slope;
}

double fin_weight(const AeroConfig& aero, const DeploymentState& deploy) {
  // Half the panels are effective for any lateral flow direction.
  double w = 0.0;
  for (double a : deploy.fin_angles) {
    w += 0.5 * aero.fin_area * aero.fin_lift_slope * std::sin(a);
  }
  return w;
}

}  // namespace

double normal_force_weight(const AeroConfig& aero,
                           const DeploymentState& deploy) {
  return body_weight(aero) + fin_weight(aero, deploy);
}

double aerodynamic_center(const AeroConfig& aero, const VehicleConfig& vehicle,
                          const DeploymentState& deploy) {
  aero.validate();
  vehicle.validate();
  deploy.validate();
  const double wb = body_weight(aero);
  const double wf = fin_weight(aero, deploy);
  return (wb * aero.body_ac_from_nose + wf * aero.fin_ac_from_nose) / (wb + wf);
}

StabilityReport static_stability(const AeroConfig& aero,
                                 const VehicleConfig& vehicle,
                                 const DeploymentState& deploy) {
  StabilityReport r;
  r.ac_from_nose = aerodynamic_center(aero, vehicle, deploy);
  r.com_from_nose = mass_properties(vehicle, deploy).com_from_nose;
  r.static_margin = r.ac_from_nose - r.com_from_nose;
  r.stable = r.static_margin > 0.0;
  return r;
}

Wrench aero_wrench(const AeroConfig& aero, const VehicleConfig& vehicle,
                   const DeploymentState& deploy, const AeroState& state,
                   const Eigen::Vector3d& wind) {
  aero.validate();
  deploy.validate();

  Wrench out;
  const Eigen::Vector3d airspeed_world = state.velocity - wind;
  const Eigen::Vector3d u_body =
      state.attitude.conjugate() * airspeed_world;
  const double speed = u_body.norm();
  const Eigen::Vector3d omega = state.angular_rate;
  const double rho = aero.air_density;
  const double fin_open = deploy.mean_fin_sin();
  const double weight = normal_force_weight(aero, deploy);

  const StabilityReport stab = static_stability(aero, vehicle, deploy);
  const double margin = stab.static_margin;
  const double fin_arm = aero.fin_ac_from_nose - stab.com_from_nose;

  if (speed > 1e-9) {
    const Eigen::Vector3d u_hat = u_body / speed;
    const double q = 0.5 * rho * speed * speed;
    const double cos_alpha = std::clamp(u_hat.z(), -1.0, 1.0);
    const double alpha = std::acos(cos_alpha);
    const double sin_alpha = std::sqrt(std::max(0.0, 1.0 - cos_alpha * cos_alpha));

    // Drag along the apparent wind, through the COM. The coefficient blends
    // from the nosecone value (flow on the nose) to the bluff value.
    const double nose_frac = std::max(cos_alpha, 0.0);
    const double cd = nose_frac * aero.body_drag_coeff_nosecone +
                      (1.0 - nose_frac) * aero.body_drag_coeff_bluff;
    const double open_frac =
        0.5 * (deploy.mean_arm_sin() + fin_open);
    const double area = aero.reference_area + aero.deployed_extra_area * open_frac;
    out.force -= q * cd * area * u_hat;

    // Normal force at the AC, perpendicular to the body axis, pushing the
    // tail leeward. With positive margin this restores the nose toward the
    // apparent wind; with negative margin it amplifies the angle of attack.
    if (sin_alpha > 1e-9) {
      // Linear to the stall angle, saturated to 90 deg, then collapsing to
      // zero at 180 deg: flow arriving from astern produces no normal force.
      double alpha_eff = std::min(alpha, aero.stall_angle);
      if (alpha > M_PI_2) {
        alpha_eff = aero.stall_angle * (M_PI - alpha) / (0.5 * M_PI);
      }
      const double n_mag = q * weight * alpha_eff;
      const Eigen::Vector3d n_hat =
          (u_hat - cos_alpha * Eigen::Vector3d::UnitZ()) / sin_alpha;
      const Eigen::Vector3d restore_axis =
          Eigen::Vector3d::UnitZ().cross(u_hat) / sin_alpha;
      out.force -= n_mag * n_hat;
      out.moment += margin * n_mag * restore_axis;
    }

    // Deep-stall autorotation: past the stall angle the separated flow feeds
    // a moment along the transverse tumble direction, so a bluff body spins
    // up end over end instead of settling tail-first. Fins claim their share
    // of the normal-force weight and suppress it accordingly.
    const Eigen::Vector3d omega_t(omega.x(), omega.y(), 0.0);
    if (alpha > aero.stall_angle && omega_t.norm() > 1e-6) {
      const double ramp =
          std::min(1.0, (alpha - aero.stall_angle) / aero.stall_angle);
      const double body_frac = body_weight(aero) / weight;
      out.moment += q * aero.autorotation_coeff * body_frac * ramp *
                    omega_t.normalized();
    }

    // Linear pitch/yaw damping from the fin normal force seen under rotation.
    const double c_lin =
        0.5 * rho * speed * fin_weight(aero, deploy) * fin_arm * fin_arm;
    out.moment.x() -= c_lin * omega.x();
    out.moment.y() -= c_lin * omega.y();
  }

  // Quadratic rate damping on all axes, scaled with fin deployment; keeps a
  // small floor so a folded vehicle is still weakly damped.
  const double c_quad = aero.yaw_damping_coeff * (0.25 + 0.75 * fin_open);
  out.moment -= c_quad * omega.norm() * omega;
  if (speed <= 1e-9 && omega.norm() <= 1e-12) {
    out.moment.setZero();
  }
  return out;
}

}  // namespace tubesim
