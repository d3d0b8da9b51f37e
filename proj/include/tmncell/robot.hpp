#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace tmncell::robot {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

enum class JointKind { Revolute, Prismatic };

/// Standard (distal) Denavit-Hartenberg parameters. For a revolute joint the
/// coordinate adds to theta_offset; for a prismatic joint it adds to d.
struct DHLink {
  double a = 0.0;
  double alpha = 0.0;
  double d = 0.0;
  double theta_offset = 0.0;
  JointKind kind = JointKind::Revolute;
};

/// Motor rotor reflected through its gear: adds gear_ratio^2 * inertia to b_ii.
struct Rotor {
  double inertia = 0.0;
  double gear_ratio = 1.0;
};

struct LinkInertia {
  double mass = 0.0;
  Vector3 com = Vector3::Zero();       // in the link frame
  Matrix3 tensor = Matrix3::Zero();    // about the com, in the link frame
  std::optional<Rotor> rotor;
};

struct Link {
  DHLink dh;
  LinkInertia inertia;
};

/// Serial chain of rigid links plus the base-frame gravity vector g0.
class RobotModel {
public:
  /// Throws SpecError if there are no links, a mass is not positive, a tensor
  /// is not symmetric positive semidefinite or breaks the triangle inequality
  /// on its principal moments, or a rotor parameter is invalid.
  RobotModel(std::vector<Link> links, Vector3 gravity);

  const std::vector<Link>& links() const noexcept { return links_; }
  const Vector3& gravity() const noexcept { return gravity_; }
  int dof() const noexcept { return static_cast<int>(links_.size()); }

private:
  std::vector<Link> links_;
  Vector3 gravity_;
};

struct JointState {
  Vector q;
  Vector qdot;
};

using GeneralizedForces = Vector;

/// Pose of link i's frame in the base frame and its centre of mass.
struct LinkFrame {
  Matrix3 rotation;
  Vector3 origin;
  Vector3 com;
};

std::vector<LinkFrame> forward_kinematics(const RobotModel& model, const Vector& q);

/// Linear (rows 0-2) and angular (rows 3-5) Jacobian of link i's com.
Eigen::Matrix<double, 6, Eigen::Dynamic> com_jacobian(const RobotModel& model, const Vector& q, int link);

Matrix inertia_matrix(const RobotModel& model, const Vector& q);

/// Partial derivatives dB/dq_k, k = 0..dof-1, by central differences.
std::vector<Matrix> inertia_partials(const RobotModel& model, const Vector& q);

/// c_i = sum_jk h_ijk qdot_k qdot_j with h_ijk = db_ij/dq_k - 1/2 db_jk/dq_i.
Vector coriolis_terms(const RobotModel& model, const Vector& q, const Vector& qdot);

/// dP/dq.
Vector gravity_vector(const RobotModel& model, const Vector& q);

double kinetic_energy(const RobotModel& model, const Vector& q, const Vector& qdot);
/// P(q) = -sum_i m_i g0^T p_i.
double potential_energy(const RobotModel& model, const Vector& q);
double lagrangian(const RobotModel& model, const Vector& q, const Vector& qdot);

/// xi = B(q) qddot + c(q, qdot) + g(q).
GeneralizedForces inverse_dynamics(const RobotModel& model, const Vector& q, const Vector& qdot,
                                   const Vector& qddot);

/// qddot = B(q)^-1 (xi - c - g). Throws SingularInertia if B is not positive definite.
Vector forward_dynamics(const RobotModel& model, const Vector& q, const Vector& qdot, const GeneralizedForces& xi);

using TorqueProfile = std::function<GeneralizedForces(double t, const JointState& state)>;

struct JointSample {
  double t = 0.0;
  Vector q;
  Vector qdot;
  GeneralizedForces xi;
  double kinetic = 0.0;
  double potential = 0.0;

  double energy() const noexcept { return kinetic + potential; }
};

struct JointTrajectory {
  double dt = 0.0;
  std::vector<JointSample> samples;
};

/// Fixed-step classical RK4 on (q, qdot). Produces round(duration/dt)+1
/// uniformly spaced samples. Throws NonFinite if the state diverges.
JointTrajectory integrate(const RobotModel& model, const JointState& initial, const TorqueProfile& torque,
                          double dt, double duration);

/// Trapezoidal integral of xi^T qdot over the trajectory.
double work_integral(const JointTrajectory& traj);

/// max_k |K_k| + max_k |P_k|, the reference for relative energy drift.
double energy_scale(const JointTrajectory& traj);

struct EnergyAudit {
  std::vector<double> residuals;  // |dE/dt - xi^T qdot| per sample, W
  double max_residual = 0.0;
  double power_scale = 0.0;
  double tolerance = 0.0;
  bool balanced = false;
};

/// Checks d(K+P)/dt = xi^T qdot at every sample, with dE/dt from second-order
/// finite differences of the sampled energy. Balanced iff
/// max_residual <= relative_tolerance * power_scale, where power_scale is
/// the larger of max_k (|dK/dt| + |dP/dt| + |xi^T qdot|) and
/// energy_scale / duration.
EnergyAudit energy_audit(const RobotModel& model, const JointTrajectory& traj, const TorqueProfile& torque,
                         double relative_tolerance = 1e-5);

/// `t,q_1..,qd_1..,xi_1..,K,P,E,residual_W`.
void write_joint_csv(std::ostream& os, const JointTrajectory& traj, const EnergyAudit& audit);

} // namespace tmncell::robot
