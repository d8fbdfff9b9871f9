// Hamiltonian builders for the single-atom ladder, the symmetric two-atom
// system and the collective (Schwinger-oscillator) ensemble, together with
// their analytic dark states and J_x reference objects.
//
// Sign convention: every Rabi coupling enters as -(1/2) Omega, with the
// relative phase phi_r carried by the upper (|2> -> |r>) transition:
//
//   <upper|H|lower> = -(1/2) Omega_r e^{i phi_r} * factor
//   <n2-side|H|n1-side> = -(1/2) Omega_1 * factor
//
// This differs from the all-positive two-atom matrix by a basis rephasing only.
#pragma once

#include <functional>
#include <vector>

#include "rydstirap/core.hpp"
#include "rydstirap/pulses.hpp"

namespace rydstirap {

/// A coupled pair of basis states and its Schwinger-boson factor.
struct Coupling {
  Eigen::Index lower;  // state before the excitation step
  Eigen::Index upper;  // state after it
  double factor;
};

/// Basis plus rule for H(t)/hbar. Lower-transition couplings scale with
/// Omega_1(t), upper-transition couplings with Omega_r(t) e^{i phi_r(t)}; the
/// diagonal carries the Rydberg interaction and, when decay_rate > 0, the
/// non-Hermitian loss -(i/2) decay_rate n_r.
class HamiltonianModel {
 public:
  HamiltonianModel(Basis basis, DriveSchedule schedule, std::vector<Coupling> lower,
                   std::vector<Coupling> upper, Eigen::VectorXd interaction, double decay_rate);

  const Basis& basis() const { return basis_; }
  const DriveSchedule& schedule() const { return schedule_; }
  Eigen::Index dimension() const { return basis_.size(); }
  double decay_rate() const { return decay_rate_; }

  MatrixXc matrix(double t) const;
  Operator hamiltonian(double t) const { return {basis_, matrix(t)}; }

  /// out = H(t) psi, evaluated on the coupling lists.
  void apply(double t, const VectorXc& psi, VectorXc& out) const;

  HamiltonianModel without_decay() const;
  HamiltonianModel with_schedule(DriveSchedule schedule) const;

 private:
  Basis basis_;
  DriveSchedule schedule_;
  std::vector<Coupling> lower_;
  std::vector<Coupling> upper_;
  Eigen::VectorXd interaction_;  // static real diagonal, rad/us
  Eigen::VectorXd rydberg_count_;
  double decay_rate_;
};

// ---------------------------------------------------------------------------
// Parameter records

struct TwoAtomModel {
  double interaction = 0.0;  // E/hbar, rad/us
  double decay_rate = 0.0;   // 1/tau_r, 1/us
  DriveSchedule schedule;
};

struct CollectiveModel {
  int atoms = 1;
  int max_rydberg = 1;       // 1 or 2
  double interaction = 0.0;  // pair shift, used when max_rydberg = 2
  double decay_rate = 0.0;
  DriveSchedule schedule;
};

HamiltonianModel single_atom_model(DriveSchedule schedule, double decay_rate = 0.0);
HamiltonianModel make_model(const TwoAtomModel& model);
HamiltonianModel make_model(const CollectiveModel& model);

/// 3x3 ladder Hamiltonian at fixed couplings.
Operator single_atom_hamiltonian(double omega1, double omega_r, double phase);
Operator two_atom_hamiltonian(const TwoAtomModel& model, double t);
Operator collective_hamiltonian(const CollectiveModel& model, double t);

// ---------------------------------------------------------------------------
// Dark states

/// cos(theta)|1> - sin(theta) e^{i phi}|r>
StateVector single_atom_dark_state(double theta, double phase);

/// Normalized two-atom dark state in the symmetric basis.
StateVector two_atom_dark_state(double theta, double phase);

/// Zero-energy state of the max_rydberg = 1 collective Hamiltonian at mixing
/// angle theta, as the kernel of the parity-odd rows. Global phase fixed so
/// the |N,0,0> amplitude is real and non-negative (or, when it vanishes, the
/// first nonzero amplitude).
StateVector collective_dark_state(int atoms, double theta, double phase);

/// Eigenvalues of -Omega_1 J_x on K atoms, ascending: -Omega_1 {-K/2, ..., K/2}.
std::vector<double> jx_eigenvalues(int k, double omega1);

/// Null vector of J_x on the (K+1)-state two-mode space (basis collective(K, 0)),
/// sign fixed so the n2 = K amplitude is positive. Throws kNoJxZeroState for odd K.
StateVector jx_zero_state(int k);

/// J_x = 0 state of N atoms for even N, or one Rydberg excitation with the
/// remaining N-1 atoms in J_x = 0 for odd N, in basis collective(N, max_rydberg).
StateVector final_dark_state(int atoms, int max_rydberg = 1);

/// Dark state along a schedule for the given model kind, for phase tracking.
using DarkStateFn = std::function<StateVector(double)>;
DarkStateFn single_atom_dark_track(const DriveSchedule& schedule);
DarkStateFn two_atom_dark_track(const DriveSchedule& schedule);
DarkStateFn collective_dark_track(const DriveSchedule& schedule, int atoms);

}  // namespace rydstirap
