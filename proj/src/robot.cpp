#include "tmncell/robot.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "tmncell/errors.hpp"
#include "tmncell/format.hpp"

namespace tmncell::robot {

namespace {

constexpr double kDiffStep = 1e-6;

void require_size(const Vector& v, int n, const char* what) {
  if (v.size() != n) {
    throw InvalidArgument(std::string(what) + " has " + std::to_string(v.size()) + " entries, expected " +
                          std::to_string(n));
  }
}

Eigen::Isometry3d dh_transform(const DHLink& dh, double q) {
  const double theta = dh.theta_offset + (dh.kind == JointKind::Revolute ? q : 0.0);
  const double d = dh.d + (dh.kind == JointKind::Prismatic ? q : 0.0);
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(dh.alpha), sa = std::sin(dh.alpha);
  Eigen::Isometry3d a = Eigen::Isometry3d::Identity();
  a.linear() << ct, -st * ca, st * sa,
                st, ct * ca, -ct * sa,
                0.0, sa, ca;
  a.translation() << dh.a * ct, dh.a * st, d;
  return a;
}

void validate_link(const Link& link, std::size_t index) {
  const std::string where = "link " + std::to_string(index + 1) + ": ";
  const auto& in = link.inertia;
  if (!(in.mass > 0.0) || !std::isfinite(in.mass)) throw SpecError(where + "mass must be positive and finite");
  if (!in.com.allFinite() || !in.tensor.allFinite()) throw SpecError(where + "non-finite inertial parameter");
  const double scale = std::max(1.0, in.tensor.cwiseAbs().maxCoeff());
  if ((in.tensor - in.tensor.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
    throw SpecError(where + "inertia tensor is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix3> eig(in.tensor, Eigen::EigenvaluesOnly);
  const Vector3 p = eig.eigenvalues();
  const double tol = 1e-12 * scale;
  if (p.minCoeff() < -tol) throw SpecError(where + "inertia tensor has a negative eigenvalue");
  if (p(0) + p(1) < p(2) - tol || p(0) + p(2) < p(1) - tol || p(1) + p(2) < p(0) - tol) {
    throw SpecError(where + "principal moments violate the triangle inequality");
  }
  const auto& dh = link.dh;
  if (!std::isfinite(dh.a) || !std::isfinite(dh.alpha) || !std::isfinite(dh.d) || !std::isfinite(dh.theta_offset)) {
    throw SpecError(where + "non-finite DH parameter");
  }
  if (in.rotor) {
    if (!(in.rotor->inertia >= 0.0) || !std::isfinite(in.rotor->inertia)) {
      throw SpecError(where + "rotor inertia must be non-negative");
    }
    if (!(in.rotor->gear_ratio > 0.0) || !std::isfinite(in.rotor->gear_ratio)) {
      throw SpecError(where + "gear ratio must be positive");
    }
  }
}

// Joint axis z_{j-1} and origin o_{j-1} for every joint j, in the base frame.
struct JointAxes {
  std::vector<Vector3> axis;
  std::vector<Vector3> origin;
};

JointAxes joint_axes(const std::vector<LinkFrame>& frames) {
  JointAxes ax;
  ax.axis.reserve(frames.size());
  ax.origin.reserve(frames.size());
  ax.axis.push_back(Vector3::UnitZ());
  ax.origin.push_back(Vector3::Zero());
  for (std::size_t i = 0; i + 1 < frames.size(); ++i) {
    ax.axis.push_back(frames[i].rotation.col(2));
    ax.origin.push_back(frames[i].origin);
  }
  return ax;
}

Eigen::Matrix<double, 6, Eigen::Dynamic> jacobian_from(const RobotModel& model, const std::vector<LinkFrame>& frames,
                                                      const JointAxes& ax, int link) {
  const int n = model.dof();
  Eigen::Matrix<double, 6, Eigen::Dynamic> jac = Eigen::Matrix<double, 6, Eigen::Dynamic>::Zero(6, n);
  const Vector3& p = frames[link].com;
  for (int j = 0; j <= link; ++j) {
    if (model.links()[j].dh.kind == JointKind::Revolute) {
      jac.block<3, 1>(0, j) = ax.axis[j].cross(p - ax.origin[j]);
      jac.block<3, 1>(3, j) = ax.axis[j];
    } else {
      jac.block<3, 1>(0, j) = ax.axis[j];
    }
  }
  return jac;
}

} // namespace

RobotModel::RobotModel(std::vector<Link> links, Vector3 gravity) : links_(std::move(links)), gravity_(gravity) {
  if (links_.empty()) throw SpecError("robot model needs at least one link");
  if (!gravity_.allFinite()) throw SpecError("gravity vector must be finite");
  for (std::size_t i = 0; i < links_.size(); ++i) validate_link(links_[i], i);
}

std::vector<LinkFrame> forward_kinematics(const RobotModel& model, const Vector& q) {
  require_size(q, model.dof(), "q");
  std::vector<LinkFrame> frames;
  frames.reserve(model.links().size());
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  for (int i = 0; i < model.dof(); ++i) {
    const auto& link = model.links()[i];
    t = t * dh_transform(link.dh, q(i));
    frames.push_back(LinkFrame{t.linear(), t.translation(), t * link.inertia.com});
  }
  return frames;
}

Eigen::Matrix<double, 6, Eigen::Dynamic> com_jacobian(const RobotModel& model, const Vector& q, int link) {
  if (link < 0 || link >= model.dof()) throw InvalidArgument("link index out of range");
  const auto frames = forward_kinematics(model, q);
  return jacobian_from(model, frames, joint_axes(frames), link);
}

Matrix inertia_matrix(const RobotModel& model, const Vector& q) {
  const auto frames = forward_kinematics(model, q);
  const auto ax = joint_axes(frames);
  const int n = model.dof();
  Matrix b = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& in = model.links()[i].inertia;
    const auto jac = jacobian_from(model, frames, ax, i);
    const auto jp = jac.topRows<3>();
    const auto jo = jac.bottomRows<3>();
    const Matrix3 world_inertia = frames[i].rotation * in.tensor * frames[i].rotation.transpose();
    b.noalias() += in.mass * jp.transpose() * jp;
    b.noalias() += jo.transpose() * world_inertia * jo;
    if (in.rotor) b(i, i) += in.rotor->gear_ratio * in.rotor->gear_ratio * in.rotor->inertia;
  }
  // Symmetric by construction up to rounding; make it exact.
  return 0.5 * (b + b.transpose());
}

std::vector<Matrix> inertia_partials(const RobotModel& model, const Vector& q) {
  require_size(q, model.dof(), "q");
  std::vector<Matrix> partials;
  partials.reserve(model.dof());
  for (int k = 0; k < model.dof(); ++k) {
    Vector plus = q, minus = q;
    plus(k) += kDiffStep;
    minus(k) -= kDiffStep;
    partials.push_back((inertia_matrix(model, plus) - inertia_matrix(model, minus)) / (2.0 * kDiffStep));
  }
  return partials;
}

Vector coriolis_terms(const RobotModel& model, const Vector& q, const Vector& qdot) {
  require_size(q, model.dof(), "q");
  require_size(qdot, model.dof(), "qdot");
  const int n = model.dof();
  Vector c = Vector::Zero(n);
  if (qdot.isZero(0.0)) return c;
  const auto db = inertia_partials(model, q);
  for (int k = 0; k < n; ++k) c += (db[k] * qdot) * qdot(k);
  for (int i = 0; i < n; ++i) c(i) -= 0.5 * qdot.dot(db[i] * qdot);
  return c;
}

Vector gravity_vector(const RobotModel& model, const Vector& q) {
  const auto frames = forward_kinematics(model, q);
  const auto ax = joint_axes(frames);
  Vector g = Vector::Zero(model.dof());
  for (int i = 0; i < model.dof(); ++i) {
    const auto jac = jacobian_from(model, frames, ax, i);
    g -= model.links()[i].inertia.mass * jac.topRows<3>().transpose() * model.gravity();
  }
  return g;
}

double kinetic_energy(const RobotModel& model, const Vector& q, const Vector& qdot) {
  require_size(qdot, model.dof(), "qdot");
  return 0.5 * qdot.dot(inertia_matrix(model, q) * qdot);
}

double potential_energy(const RobotModel& model, const Vector& q) {
  const auto frames = forward_kinematics(model, q);
  double p = 0.0;
  for (int i = 0; i < model.dof(); ++i) p -= model.links()[i].inertia.mass * model.gravity().dot(frames[i].com);
  return p;
}

double lagrangian(const RobotModel& model, const Vector& q, const Vector& qdot) {
  return kinetic_energy(model, q, qdot) - potential_energy(model, q);
}

GeneralizedForces inverse_dynamics(const RobotModel& model, const Vector& q, const Vector& qdot,
                                   const Vector& qddot) {
  require_size(qddot, model.dof(), "qddot");
  return inertia_matrix(model, q) * qddot + coriolis_terms(model, q, qdot) + gravity_vector(model, q);
}

Vector forward_dynamics(const RobotModel& model, const Vector& q, const Vector& qdot, const GeneralizedForces& xi) {
  require_size(xi, model.dof(), "xi");
  const Matrix b = inertia_matrix(model, q);
  Eigen::LLT<Matrix> llt(b);
  if (llt.info() != Eigen::Success) throw SingularInertia("inertia matrix is not positive definite");
  return llt.solve(xi - coriolis_terms(model, q, qdot) - gravity_vector(model, q));
}

namespace {

JointSample make_sample(const RobotModel& model, double t, const JointState& s, const TorqueProfile& torque) {
  JointSample out;
  out.t = t;
  out.q = s.q;
  out.qdot = s.qdot;
  out.xi = torque(t, s);
  require_size(out.xi, model.dof(), "torque profile output");
  out.kinetic = kinetic_energy(model, s.q, s.qdot);
  out.potential = potential_energy(model, s.q);
  return out;
}

} // namespace

JointTrajectory integrate(const RobotModel& model, const JointState& initial, const TorqueProfile& torque, double dt,
                          double duration) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (!(duration >= dt) || !std::isfinite(duration)) throw InvalidArgument("duration must be at least dt");
  require_size(initial.q, model.dof(), "initial q");
  require_size(initial.qdot, model.dof(), "initial qdot");
  if (!initial.q.allFinite() || !initial.qdot.allFinite()) throw NonFinite("initial state is not finite");

  const auto steps = static_cast<long>(std::llround(duration / dt));
  auto accel = [&](double t, const Vector& q, const Vector& qd) {
    return forward_dynamics(model, q, qd, torque(t, JointState{q, qd}));
  };

  JointTrajectory traj;
  traj.dt = dt;
  traj.samples.reserve(static_cast<std::size_t>(steps) + 1);
  JointState s = initial;
  traj.samples.push_back(make_sample(model, 0.0, s, torque));
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Vector k1q = s.qdot;
    const Vector k1v = accel(t, s.q, s.qdot);
    const Vector k2q = s.qdot + 0.5 * dt * k1v;
    const Vector k2v = accel(t + 0.5 * dt, s.q + 0.5 * dt * k1q, k2q);
    const Vector k3q = s.qdot + 0.5 * dt * k2v;
    const Vector k3v = accel(t + 0.5 * dt, s.q + 0.5 * dt * k2q, k3q);
    const Vector k4q = s.qdot + dt * k3v;
    const Vector k4v = accel(t + dt, s.q + dt * k3q, k4q);
    s.q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    s.qdot += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    const double t_next = static_cast<double>(k + 1) * dt;
    if (!s.q.allFinite() || !s.qdot.allFinite()) throw NonFinite("state diverged at t = " + format_double(t_next));
    auto sample = make_sample(model, t_next, s, torque);
    // The state can stay finite while K = qdot^T B qdot / 2 overflows.
    if (!std::isfinite(sample.energy()) || !sample.xi.allFinite()) {
      throw NonFinite("energy diverged at t = " + format_double(t_next));
    }
    traj.samples.push_back(std::move(sample));
  }
  return traj;
}

double work_integral(const JointTrajectory& traj) {
  double w = 0.0;
  for (std::size_t k = 1; k < traj.samples.size(); ++k) {
    const auto& a = traj.samples[k - 1];
    const auto& b = traj.samples[k];
    w += 0.5 * (b.t - a.t) * (a.xi.dot(a.qdot) + b.xi.dot(b.qdot));
  }
  return w;
}

double energy_scale(const JointTrajectory& traj) {
  double k = 0.0, p = 0.0;
  for (const auto& s : traj.samples) {
    k = std::max(k, std::abs(s.kinetic));
    p = std::max(p, std::abs(s.potential));
  }
  return k + p;
}

namespace {

// Second-order derivative of a uniformly sampled series at index k.
template <class Get>
double sampled_rate(const std::vector<JointSample>& s, std::size_t k, double dt, Get get) {
  const std::size_t n = s.size();
  if (k == 0) return (-3.0 * get(s[0]) + 4.0 * get(s[1]) - get(s[2])) / (2.0 * dt);
  if (k == n - 1) return (3.0 * get(s[n - 1]) - 4.0 * get(s[n - 2]) + get(s[n - 3])) / (2.0 * dt);
  return (get(s[k + 1]) - get(s[k - 1])) / (2.0 * dt);
}

} // namespace

EnergyAudit energy_audit(const RobotModel& model, const JointTrajectory& traj, const TorqueProfile& torque,
                         double relative_tolerance) {
  const auto& s = traj.samples;
  if (s.size() < 3) throw InvalidArgument("energy audit needs at least three samples");
  if (!(traj.dt > 0.0)) throw InvalidArgument("trajectory has no sample spacing");

  EnergyAudit audit;
  audit.residuals.reserve(s.size());
  double rate_scale = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k].q.size() != model.dof() || s[k].qdot.size() != model.dof()) {
      throw InvalidArgument("trajectory sample " + std::to_string(k) + " does not match the model dimension");
    }
    const GeneralizedForces xi = torque(s[k].t, JointState{s[k].q, s[k].qdot});
    if (xi.size() != model.dof()) throw InvalidArgument("torque profile output does not match the model dimension");
    const double power = xi.dot(s[k].qdot);
    const double dk = sampled_rate(s, k, traj.dt, [](const JointSample& x) { return x.kinetic; });
    const double dp = sampled_rate(s, k, traj.dt, [](const JointSample& x) { return x.potential; });
    const double r = std::abs(dk + dp - power);
    audit.residuals.push_back(r);
    audit.max_residual = std::max(audit.max_residual, r);
    rate_scale = std::max(rate_scale, std::abs(dk) + std::abs(dp) + std::abs(power));
  }
  const double duration = s.back().t - s.front().t;
  audit.power_scale = std::max(rate_scale, energy_scale(traj) / duration);
  audit.tolerance = relative_tolerance * audit.power_scale;
  audit.balanced = audit.max_residual <= audit.tolerance;
  return audit;
}

void write_joint_csv(std::ostream& os, const JointTrajectory& traj, const EnergyAudit& audit) {
  if (traj.samples.empty()) return;
  const auto n = traj.samples.front().q.size();
  os << 't';
  for (Eigen::Index i = 1; i <= n; ++i) os << ",q_" << i;
  for (Eigen::Index i = 1; i <= n; ++i) os << ",qd_" << i;
  for (Eigen::Index i = 1; i <= n; ++i) os << ",xi_" << i;
  os << ",K,P,E,residual_W\n";
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    const auto& s = traj.samples[k];
    os << format_double(s.t);
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_double(s.q(i));
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_double(s.qdot(i));
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_double(s.xi(i));
    os << ',' << format_double(s.kinetic) << ',' << format_double(s.potential) << ',' << format_double(s.energy())
       << ',' << format_double(k < audit.residuals.size() ? audit.residuals[k] : 0.0) << '\n';
  }
}

} // namespace tmncell::robot
