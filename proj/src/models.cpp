#include "rydstirap/models.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace rydstirap {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

struct Ladder {
  std::vector<Coupling> lower;
  std::vector<Coupling> upper;
};

// Writes the coupling part of H for fixed drive values into `h`.
void add_couplings(const Ladder& ladder, double omega1, double omega_r, double phase, MatrixXc& h) {
  const double w1 = -0.5 * omega1;
  const cd wr = -0.5 * omega_r * std::exp(kI * phase);
  for (const auto& c : ladder.lower) {
    h(c.upper, c.lower) += w1 * c.factor;
    h(c.lower, c.upper) += w1 * c.factor;
  }
  for (const auto& c : ladder.upper) {
    h(c.upper, c.lower) += wr * c.factor;
    h(c.lower, c.upper) += std::conj(wr) * c.factor;
  }
}

Ladder single_atom_ladder() {
  // |1> -(Omega_1)- |2> -(Omega_r)- |r>
  return {{{0, 1, 1.0}}, {{1, 2, 1.0}}};
}

Ladder two_atom_ladder() {
  // Indices: 0 |11>, 1 sym|1r>, 2 sym|12>, 3 |rr>, 4 sym|2r>, 5 |22>.
  const double r2 = std::sqrt(2.0);
  return {{{0, 2, r2}, {2, 5, r2}, {1, 4, 1.0}},
          {{2, 1, 1.0}, {5, 4, r2}, {4, 3, r2}}};
}

Ladder collective_ladder(const Basis& basis) {
  Ladder ladder;
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    const BasisLabel& s = basis[i];
    BasisLabel lowered = s;
    lowered.n1 -= 1;
    lowered.n2 += 1;
    if (s.n1 > 0) {
      if (auto j = basis.find(lowered)) ladder.lower.push_back({i, *j, std::sqrt(double(s.n1) * (s.n2 + 1))});
    }
    BasisLabel excited = s;
    excited.n2 -= 1;
    excited.nr += 1;
    if (s.n2 > 0) {
      if (auto j = basis.find(excited)) ladder.upper.push_back({i, *j, std::sqrt(double(s.n2) * (s.nr + 1))});
    }
  }
  return ladder;
}

Eigen::VectorXd rydberg_counts(const Basis& basis) {
  Eigen::VectorXd n(basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i) n(i) = basis[i].nr;
  return n;
}

void check_rates(double interaction, double decay_rate) {
  if (!(interaction >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "interaction E must be non-negative");
  if (!(decay_rate >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "decay rate must be non-negative");
}

void fix_global_phase(VectorXc& v, Eigen::Index preferred) {
  Eigen::Index ref = preferred;
  if (std::abs(v(ref)) < 1e-12) {
    v.cwiseAbs().maxCoeff(&ref);
  }
  v *= std::conj(v(ref)) / std::abs(v(ref));
}

}  // namespace

// ---------------------------------------------------------------------------

HamiltonianModel::HamiltonianModel(Basis basis, DriveSchedule schedule, std::vector<Coupling> lower,
                                   std::vector<Coupling> upper, Eigen::VectorXd interaction, double decay_rate)
    : basis_(std::move(basis)), schedule_(std::move(schedule)), lower_(std::move(lower)),
      upper_(std::move(upper)), interaction_(std::move(interaction)), rydberg_count_(rydberg_counts(basis_)),
      decay_rate_(decay_rate) {
  if (interaction_.size() != basis_.size()) {
    throw Error(ErrorCode::kBasisMismatch, "interaction diagonal does not match the basis");
  }
}

MatrixXc HamiltonianModel::matrix(double t) const {
  MatrixXc h = MatrixXc::Zero(dimension(), dimension());
  add_couplings({lower_, upper_}, schedule_.omega1(t), schedule_.omega_r(t), schedule_.phase(t), h);
  h.diagonal() += interaction_.cast<cd>() - (0.5 * decay_rate_) * kI * rydberg_count_.cast<cd>();
  return h;
}

void HamiltonianModel::apply(double t, const VectorXc& psi, VectorXc& out) const {
  const double w1 = -0.5 * schedule_.omega1(t);
  const cd wr = -0.5 * schedule_.omega_r(t) * std::exp(kI * schedule_.phase(t));
  const cd wr_conj = std::conj(wr);
  const cd loss = -0.5 * decay_rate_ * kI;
  for (Eigen::Index i = 0; i < psi.size(); ++i) out(i) = (interaction_(i) + loss * rydberg_count_(i)) * psi(i);
  if (w1 != 0.0) {
    for (const auto& c : lower_) {
      const double w = w1 * c.factor;
      out(c.upper) += w * psi(c.lower);
      out(c.lower) += w * psi(c.upper);
    }
  }
  if (wr != 0.0) {
    for (const auto& c : upper_) {
      out(c.upper) += (wr * c.factor) * psi(c.lower);
      out(c.lower) += (wr_conj * c.factor) * psi(c.upper);
    }
  }
}

HamiltonianModel HamiltonianModel::without_decay() const {
  HamiltonianModel copy = *this;
  copy.decay_rate_ = 0.0;
  return copy;
}

HamiltonianModel HamiltonianModel::with_schedule(DriveSchedule schedule) const {
  HamiltonianModel copy = *this;
  copy.schedule_ = std::move(schedule);
  return copy;
}

// ---------------------------------------------------------------------------

HamiltonianModel single_atom_model(DriveSchedule schedule, double decay_rate) {
  check_rates(0.0, decay_rate);
  Ladder l = single_atom_ladder();
  return HamiltonianModel(Basis::single_atom_ladder(), std::move(schedule), std::move(l.lower),
                          std::move(l.upper), Eigen::VectorXd::Zero(3), decay_rate);
}

HamiltonianModel make_model(const TwoAtomModel& model) {
  check_rates(model.interaction, model.decay_rate);
  Ladder l = two_atom_ladder();
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(6);
  diag(3) = model.interaction;
  return HamiltonianModel(Basis::two_atom_symmetric(), model.schedule, std::move(l.lower), std::move(l.upper),
                          std::move(diag), model.decay_rate);
}

HamiltonianModel make_model(const CollectiveModel& model) {
  check_rates(model.interaction, model.decay_rate);
  if (model.atoms < 1) throw Error(ErrorCode::kInvalidArgument, "collective model needs at least one atom");
  if (model.max_rydberg != 1 && model.max_rydberg != 2) {
    throw Error(ErrorCode::kInvalidArgument, "max_rydberg must be 1 or 2");
  }
  Basis basis = Basis::collective(model.atoms, model.max_rydberg);
  Ladder l = collective_ladder(basis);
  Eigen::VectorXd diag(basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    const int nr = basis[i].nr;
    diag(i) = model.interaction * 0.5 * nr * (nr - 1);
  }
  return HamiltonianModel(std::move(basis), model.schedule, std::move(l.lower), std::move(l.upper),
                          std::move(diag), model.decay_rate);
}

Operator single_atom_hamiltonian(double omega1, double omega_r, double phase) {
  MatrixXc h = MatrixXc::Zero(3, 3);
  add_couplings(single_atom_ladder(), omega1, omega_r, phase, h);
  return {Basis::single_atom_ladder(), std::move(h)};
}

Operator two_atom_hamiltonian(const TwoAtomModel& model, double t) { return make_model(model).hamiltonian(t); }

Operator collective_hamiltonian(const CollectiveModel& model, double t) {
  return make_model(model).hamiltonian(t);
}

// ---------------------------------------------------------------------------

StateVector single_atom_dark_state(double theta, double phase) {
  VectorXc v(3);
  v << std::cos(theta), 0.0, -std::sin(theta) * std::exp(kI * phase);
  return StateVector::normalized(Basis::single_atom_ladder(), std::move(v));
}

StateVector two_atom_dark_state(double theta, double phase) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  VectorXc v = VectorXc::Zero(6);
  v(0) = c * c - s * s;
  // (|1r> + |r1>) = sqrt(2) sym|1r>
  v(1) = -std::sqrt(2.0) * c * s * std::exp(kI * phase);
  v(5) = s * s;
  return StateVector::normalized(Basis::two_atom_symmetric(), std::move(v));
}

StateVector collective_dark_state(int atoms, double theta, double phase) {
  if (atoms < 1) throw Error(ErrorCode::kInvalidArgument, "collective dark state needs at least one atom");
  Basis basis = Basis::collective(atoms, 1);
  MatrixXc h = MatrixXc::Zero(basis.size(), basis.size());
  add_couplings(collective_ladder(basis), std::sin(theta), std::cos(theta), phase, h);

  // H is odd under parity, so H maps even-n2 states onto odd-n2 states only.
  std::vector<Eigen::Index> even;
  std::vector<Eigen::Index> odd;
  for (Eigen::Index i = 0; i < basis.size(); ++i) (basis[i].n2 % 2 == 0 ? even : odd).push_back(i);
  MatrixXc block(static_cast<Eigen::Index>(odd.size()), static_cast<Eigen::Index>(even.size()));
  for (std::size_t r = 0; r < odd.size(); ++r) {
    for (std::size_t c = 0; c < even.size(); ++c) block(Eigen::Index(r), Eigen::Index(c)) = h(odd[r], even[c]);
  }

  VectorXc kernel;
  if (block.rows() == 0) {
    kernel = VectorXc::Zero(block.cols());
    kernel(0) = 1.0;
  } else {
    Eigen::JacobiSVD<MatrixXc> svd(block, Eigen::ComputeFullV);
    kernel = svd.matrixV().col(block.cols() - 1);
  }
  VectorXc v = VectorXc::Zero(basis.size());
  for (std::size_t c = 0; c < even.size(); ++c) v(even[c]) = kernel(Eigen::Index(c));
  fix_global_phase(v, 0);
  return StateVector::normalized(std::move(basis), std::move(v));
}

std::vector<double> jx_eigenvalues(int k, double omega1) {
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "J_x ladder needs K >= 0");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(k) + 1);
  for (int m = 0; m <= k; ++m) values.push_back(-omega1 * (0.5 * k - m));
  std::sort(values.begin(), values.end());
  return values;
}

StateVector jx_zero_state(int k) {
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "J_x state needs K >= 0");
  if (k % 2 != 0) {
    throw Error(ErrorCode::kNoJxZeroState, "J_x has no zero eigenvalue for odd K = " + std::to_string(k));
  }
  // J_x is tridiagonal with zero diagonal and off-diagonal
  // b_j = <j+1|J_x|j> = sqrt((K-j)(j+1))/2 in the n2 = j basis, so the null
  // vector obeys x_{j+1} = -b_{j-1} x_{j-1} / b_j with x odd = 0.
  auto b = [k](int j) { return 0.5 * std::sqrt(double(k - j) * (j + 1)); };
  VectorXc x = VectorXc::Zero(k + 1);
  x(0) = 1.0;
  for (int j = 1; j + 1 <= k; j += 2) x(j + 1) = -b(j - 1) * x(j - 1) / b(j);
  if (x(k).real() < 0.0) x = -x;
  return StateVector::normalized(Basis::collective(k, 0), std::move(x));
}

StateVector final_dark_state(int atoms, int max_rydberg) {
  if (atoms < 1) throw Error(ErrorCode::kInvalidArgument, "final dark state needs at least one atom");
  const bool odd = atoms % 2 != 0;
  if (odd && max_rydberg < 1) {
    throw Error(ErrorCode::kInvalidArgument, "odd atom numbers end with a Rydberg excitation");
  }
  Basis basis = Basis::collective(atoms, max_rydberg);
  const int k = odd ? atoms - 1 : atoms;
  const int nr = odd ? 1 : 0;
  const StateVector jx = jx_zero_state(k);
  VectorXc v = VectorXc::Zero(basis.size());
  // Odd N: the Rydberg component inherits the -sin(theta) sign of the
  // single-atom dark state at theta = pi/2.
  const double sign = odd ? -1.0 : 1.0;
  for (int n2 = 0; n2 <= k; ++n2) {
    v(basis.index_of({BasisKind::kCollective, 0, k - n2, n2, nr})) = sign * jx[n2];
  }
  return StateVector(std::move(basis), std::move(v));
}

DarkStateFn single_atom_dark_track(const DriveSchedule& schedule) {
  return [schedule](double t) { return single_atom_dark_state(schedule.mixing_angle(t), schedule.phase(t)); };
}

DarkStateFn two_atom_dark_track(const DriveSchedule& schedule) {
  return [schedule](double t) { return two_atom_dark_state(schedule.mixing_angle(t), schedule.phase(t)); };
}

DarkStateFn collective_dark_track(const DriveSchedule& schedule, int atoms) {
  return [schedule, atoms](double t) {
    return collective_dark_state(atoms, schedule.mixing_angle(t), schedule.phase(t));
  };
}

}  // namespace rydstirap
