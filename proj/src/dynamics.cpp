#include "tubesim/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace tubesim {

const char* to_string(SimEventKind kind) {
  switch (kind) {
    case SimEventKind::TubeExit: return "TubeExit";
    case SimEventKind::ArmLatched: return "ArmLatched";
    case SimEventKind::FinSettled: return "FinSettled";
    case SimEventKind::Apogee: return "Apogee";
    case SimEventKind::Landed: return "Landed";
    case SimEventKind::Tumble: return "Tumble";
  }
  return "?";
}

namespace {

struct StateDeriv {
  Eigen::Vector3d dpos;
  Eigen::Vector3d dvel;
  Eigen::Vector4d dquat;  // (w, x, y, z)
  Eigen::Vector3d domega;
};

Eigen::Vector4d quat_vec(const Eigen::Quaterniond& q) {
  return {q.w(), q.x(), q.y(), q.z()};
}

Eigen::Quaterniond vec_quat(const Eigen::Vector4d& v) {
  return {v(0), v(1), v(2), v(3)};
}

Eigen::Vector4d quat_derivative(const Eigen::Quaterniond& q,
                                const Eigen::Vector3d& omega) {
  const Eigen::Quaterniond w(0.0, omega.x(), omega.y(), omega.z());
  const Eigen::Quaterniond qd = q * w;
  return 0.5 * quat_vec(qd);
}

void check_finite(const StateDeriv& d, double t) {
  const bool ok = d.dpos.allFinite() && d.dvel.allFinite() &&
                  d.dquat.allFinite() && d.domega.allFinite();
  if (!ok) {
    std::ostringstream msg;
    msg << "integration fault at t=" << t
        << ": non-finite derivative (dvel=" << d.dvel.transpose()
        << ", domega=" << d.domega.transpose() << ")";
    throw IntegrationFault(msg.str());
  }
}

}  // namespace

std::vector<SimEvent> Integrator::step(RigidBodyState& state,
                                       DeploymentState& deploy,
                                       const WrenchHook& wrench_hook, double t,
                                       double dt) const {
  if (!(dt > 0.0 && dt <= 5e-3)) {
    throw std::invalid_argument("dt must be in (0, 5 ms]");
  }
  if (std::abs(state.attitude.norm() - 1.0) > 1e-6) {
    throw std::invalid_argument("attitude quaternion is not normalized");
  }

  // Quasi-static inertia, frozen at the step's initial deployment.
  const MassProperties mp = mass_properties(vehicle_, deploy);
  const Eigen::Vector3d inertia = mp.inertia_diag;
  const double mass = vehicle_.total_mass;

  Eigen::Vector3d inertia_rate = Eigen::Vector3d::Zero();
  if (inertia_rate_term_ && (!deploy.all_arms_latched() || !deploy.all_fins_settled())) {
    // Finite-difference estimate of dI/dt from the hinge rates.
    DeploymentState ahead = deploy;
    const double h = 1e-4;
    for (size_t i = 0; i < ahead.arm_angles.size(); ++i) {
      if (!ahead.arm_latched[i]) {
        ahead.arm_angles[i] = std::min(
            ahead.arm_angles[i] + h * hinge_torque(vehicle_, ahead.arm_angles[i]) /
                                      vehicle_.hinge_damping,
            kHingeOpen);
      }
    }
    for (size_t i = 0; i < ahead.fin_angles.size(); ++i) {
      if (!ahead.fin_settled[i]) {
        ahead.fin_angles[i] = std::min(
            ahead.fin_angles[i] + h * hinge_torque(vehicle_, ahead.fin_angles[i]) /
                                      vehicle_.hinge_damping,
            kHingeOpen);
      }
    }
    inertia_rate = (mass_properties(vehicle_, ahead).inertia_diag - inertia) / h;
  }

  const auto derivative = [&](const RigidBodyState& s, double ts) {
    const Wrench w = wrench_hook(s, deploy, ts);
    StateDeriv d;
    d.dpos = s.velocity;
    d.dvel = Eigen::Vector3d(0, 0, -kGravity) + (s.attitude * w.force) / mass;
    d.dquat = quat_derivative(s.attitude, s.angular_rate);
    const Eigen::Vector3d iw = inertia.cwiseProduct(s.angular_rate);
    Eigen::Vector3d torque = w.moment - s.angular_rate.cross(iw);
    torque -= inertia_rate.cwiseProduct(s.angular_rate);
    d.domega = torque.cwiseQuotient(inertia);
    check_finite(d, ts);
    return d;
  };

  const auto advance = [&](const RigidBodyState& s, const StateDeriv& d,
                           double h) {
    RigidBodyState n;
    n.position = s.position + h * d.dpos;
    n.velocity = s.velocity + h * d.dvel;
    n.attitude = vec_quat(quat_vec(s.attitude) + h * d.dquat);
    n.angular_rate = s.angular_rate + h * d.domega;
    return n;
  };

  const StateDeriv k1 = derivative(state, t);
  const StateDeriv k2 = derivative(advance(state, k1, 0.5 * dt), t + 0.5 * dt);
  const StateDeriv k3 = derivative(advance(state, k2, 0.5 * dt), t + 0.5 * dt);
  const StateDeriv k4 = derivative(advance(state, k3, dt), t + dt);

  state.position += dt / 6.0 * (k1.dpos + 2.0 * k2.dpos + 2.0 * k3.dpos + k4.dpos);
  state.velocity += dt / 6.0 * (k1.dvel + 2.0 * k2.dvel + 2.0 * k3.dvel + k4.dvel);
  const Eigen::Vector4d q =
      quat_vec(state.attitude) +
      dt / 6.0 * (k1.dquat + 2.0 * k2.dquat + 2.0 * k3.dquat + k4.dquat);
  state.attitude = vec_quat(q).normalized();
  state.angular_rate +=
      dt / 6.0 * (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega);

  // Damping-dominated hinge dynamics: theta_dot = tau(theta) / c, clamped and
  // latched at full travel. Four Euler substeps keep the per-step error well
  // below the spring time scale.
  std::vector<SimEvent> events;
  const int substeps = 4;
  const double h = dt / substeps;
  auto advance_hinge = [&](double& angle) {
    for (int k = 0; k < substeps; ++k) {
      angle += h * hinge_torque(vehicle_, angle) / vehicle_.hinge_damping;
      if (angle >= kHingeOpen) {
        angle = kHingeOpen;
        return true;
      }
    }
    return false;
  };
  for (size_t i = 0; i < deploy.arm_angles.size(); ++i) {
    if (deploy.arm_latched[i]) continue;
    if (advance_hinge(deploy.arm_angles[i])) {
      deploy.arm_latched[i] = true;
      events.push_back({SimEventKind::ArmLatched, t + dt, static_cast<int>(i)});
    }
  }
  for (size_t i = 0; i < deploy.fin_angles.size(); ++i) {
    if (deploy.fin_settled[i]) continue;
    if (advance_hinge(deploy.fin_angles[i])) {
      deploy.fin_settled[i] = true;
      events.push_back({SimEventKind::FinSettled, t + dt, static_cast<int>(i)});
    }
  }
  return events;
}

std::optional<SimEvent> detect_apogee(const RigidBodyState& prev,
                                      const RigidBodyState& cur, double t) {
  if (prev.velocity.z() > 0.0 && cur.velocity.z() <= 0.0) {
    return SimEvent{SimEventKind::Apogee, t};
  }
  return std::nullopt;
}

std::optional<SimEvent> TumbleDetector::update(const RigidBodyState& state,
                                               double t) {
  if (fired_) return std::nullopt;
  const Eigen::Vector3d body_z = state.attitude * Eigen::Vector3d::UnitZ();
  const bool inverted = body_z.z() < 0.0;
  const bool spinning = state.angular_rate.norm() > rate_threshold_;
  if (inverted && spinning) {
    if (!window_start_) window_start_ = t;
    if (t - *window_start_ >= window_) {
      fired_ = true;
      return SimEvent{SimEventKind::Tumble, t};
    }
  } else {
    window_start_.reset();
  }
  return std::nullopt;
}

double mechanical_energy(const VehicleConfig& vehicle,
                         const DeploymentState& deploy,
                         const RigidBodyState& state) {
  const MassProperties mp = mass_properties(vehicle, deploy);
  const double m = vehicle.total_mass;
  const Eigen::Vector3d& w = state.angular_rate;
  return 0.5 * m * state.velocity.squaredNorm() +
         m * kGravity * state.position.z() +
         0.5 * w.dot(mp.inertia_diag.cwiseProduct(w));
}

}  // namespace tubesim
