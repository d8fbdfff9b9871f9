// Basis-labelled state vectors, operators and the dense linear algebra every
// other module builds on.
//
// Frequencies are angular (rad/us) and times are in microseconds throughout;
// conversion from the MHz values quoted in lab notation happens only at the
// boundary via angular_from_mhz().
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rydstirap {

enum class ErrorCode {
  kInvalidArgument,
  kBasisMismatch,
  kNotHermitian,
  kUndefinedMixingAngle,
  kNonAdiabaticSchedule,
  kNoJxZeroState,
  kStepUnderflow,
  kIntegratorUnstable,
  kNonFiniteAmplitude,
  kAdiabaticityLost,
  kPhaseSampling,
  kConfig,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable label next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double angular_from_mhz(double f_mhz) { return kTwoPi * f_mhz; }
constexpr double mhz_from_angular(double omega) { return omega / kTwoPi; }

// ---------------------------------------------------------------------------
// Basis labels

enum class BasisKind : std::uint8_t {
  kSingleAtomLadder,   // {|1>, |2>, |r>}
  kTwoAtomSymmetric,   // the six symmetric two-atom states
  kCollective,         // |n1, n2, n_r> symmetric ensemble states
  kGroundRegister,     // |n0, n1> symmetric states of the qubit levels
};

/// Occupation-number label. Every kind is expressed through occupations so
/// that Rydberg counts and parity are uniform across bases.
struct BasisLabel {
  BasisKind kind = BasisKind::kCollective;
  int n0 = 0;  // qubit level |0>, only used by kGroundRegister
  int n1 = 0;
  int n2 = 0;
  int nr = 0;

  int atoms() const { return n0 + n1 + n2 + nr; }
  std::string name() const;

  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

/// Immutable, cheaply copyable ordered list of labels.
class Basis {
 public:
  Basis() : labels_(std::make_shared<const std::vector<BasisLabel>>()) {}
  explicit Basis(std::vector<BasisLabel> labels)
      : labels_(std::make_shared<const std::vector<BasisLabel>>(std::move(labels))) {}

  static Basis single_atom_ladder();
  // Order: |11>, sym|1r>, sym|12>, |rr>, sym|2r>, |22>.
  static Basis two_atom_symmetric();
  // Order: n_r = 0 by ascending n2, then n_r = 1, then n_r = 2 (capped at
  // max_rydberg and at the atom count).
  static Basis collective(int atoms, int max_rydberg);
  // Order: ascending n1.
  static Basis ground_register(int atoms);

  Eigen::Index size() const { return static_cast<Eigen::Index>(labels_->size()); }
  const BasisLabel& operator[](Eigen::Index i) const { return (*labels_)[static_cast<std::size_t>(i)]; }
  auto begin() const { return labels_->begin(); }
  auto end() const { return labels_->end(); }

  std::optional<Eigen::Index> find(const BasisLabel& label) const;
  Eigen::Index index_of(const BasisLabel& label) const;

  friend bool operator==(const Basis& a, const Basis& b) {
    return a.labels_ == b.labels_ || *a.labels_ == *b.labels_;
  }

 private:
  std::shared_ptr<const std::vector<BasisLabel>> labels_;
};

// ---------------------------------------------------------------------------
// Dense types

template <typename Real>
using ComplexVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using ComplexMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using VectorXc = ComplexVector<double>;
using MatrixXc = ComplexMatrix<double>;

/// Complex amplitudes over a labelled basis. The squared norm may drop below
/// one (decay leaks probability out of the tracked space) but never exceeds it.
template <typename Real>
class BasicStateVector {
 public:
  using Scalar = std::complex<Real>;
  // Room for integrator round-off; also covers single precision.
  static constexpr Real kNormSlack = std::max(Real(1e-6), 16 * std::numeric_limits<Real>::epsilon());

  BasicStateVector(Basis basis, ComplexVector<Real> amplitudes)
      : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != basis_.size()) {
      throw Error(ErrorCode::kBasisMismatch, "amplitude count " + std::to_string(amplitudes_.size()) +
                                                 " does not match basis size " +
                                                 std::to_string(basis_.size()));
    }
    if (!amplitudes_.allFinite()) {
      throw Error(ErrorCode::kNonFiniteAmplitude, "state vector has a non-finite amplitude");
    }
    if (squared_norm() > Real(1) + kNormSlack) {
      throw Error(ErrorCode::kInvalidArgument, "state vector norm exceeds one");
    }
  }

  static BasicStateVector basis_state(Basis basis, Eigen::Index index) {
    ComplexVector<Real> amps = ComplexVector<Real>::Zero(basis.size());
    amps(index) = Scalar(1);
    return BasicStateVector(std::move(basis), std::move(amps));
  }
  static BasicStateVector basis_state(Basis basis, const BasisLabel& label) {
    const Eigen::Index i = basis.index_of(label);
    return basis_state(std::move(basis), i);
  }
  /// Normalizes `amplitudes` before wrapping them.
  static BasicStateVector normalized(Basis basis, ComplexVector<Real> amplitudes) {
    const Real n = amplitudes.norm();
    if (!(n > Real(0))) throw Error(ErrorCode::kInvalidArgument, "cannot normalize a zero vector");
    amplitudes /= n;
    return BasicStateVector(std::move(basis), std::move(amplitudes));
  }

  const Basis& basis() const { return basis_; }
  const ComplexVector<Real>& amplitudes() const { return amplitudes_; }
  Eigen::Index size() const { return amplitudes_.size(); }
  Scalar operator[](Eigen::Index i) const { return amplitudes_(i); }
  Scalar amplitude(const BasisLabel& label) const { return amplitudes_(basis_.index_of(label)); }

  Real squared_norm() const { return amplitudes_.squaredNorm(); }
  RealVector<Real> populations() const { return amplitudes_.cwiseAbs2(); }

  /// Expectation value of the Rydberg excitation number.
  Real rydberg_population() const {
    Real total = 0;
    for (Eigen::Index i = 0; i < size(); ++i) total += Real(basis_[i].nr) * std::norm(amplitudes_(i));
    return total;
  }

 private:
  Basis basis_;
  ComplexVector<Real> amplitudes_;
};

using StateVector = BasicStateVector<double>;

/// Dense square matrix in a declared basis. Hamiltonians are stored as H/hbar.
template <typename Real>
struct BasicOperator {
  Basis basis;
  ComplexMatrix<Real> matrix;
};

using Operator = BasicOperator<double>;

/// <a|b>
template <typename Real>
std::complex<Real> inner_product(const BasicStateVector<Real>& a, const BasicStateVector<Real>& b) {
  if (!(a.basis() == b.basis())) {
    throw Error(ErrorCode::kBasisMismatch, "inner product of states in different bases");
  }
  return a.amplitudes().dot(b.amplitudes());
}

/// |<a|b>|^2 without renormalization.
template <typename Real>
Real fidelity(const BasicStateVector<Real>& a, const BasicStateVector<Real>& b) {
  return std::min(Real(1), std::norm(inner_product(a, b)));
}

/// Theta = (-1)^{n2}, diagonal in any occupation basis.
template <typename Real = double>
BasicOperator<Real> parity_operator(const Basis& basis) {
  ComplexMatrix<Real> m = ComplexMatrix<Real>::Zero(basis.size(), basis.size());
  for (Eigen::Index i = 0; i < basis.size(); ++i) m(i, i) = (basis[i].n2 % 2 == 0) ? Real(1) : Real(-1);
  return {basis, std::move(m)};
}

/// max_ij |A_ij - conj(A_ji)|
template <typename Derived>
typename Derived::RealScalar hermiticity_residual(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() == 0) return 0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Real>
struct EigenDecomposition {
  RealVector<Real> eigenvalues;       // ascending
  ComplexMatrix<Real> eigenvectors;   // columns, orthonormal
};

template <typename Real>
EigenDecomposition<Real> hermitian_eigensolve(const ComplexMatrix<Real>& a) {
  if (a.rows() != a.cols()) throw Error(ErrorCode::kInvalidArgument, "eigensolve of a non-square matrix");
  const Real scale = std::max(Real(1), a.cwiseAbs().maxCoeff());
  if (hermiticity_residual(a) > Real(1e-12) * scale) {
    throw Error(ErrorCode::kNotHermitian, "eigensolve input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> solver(a);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kInvalidArgument, "self-adjoint eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

template <typename Real>
EigenDecomposition<Real> hermitian_eigensolve(const BasicOperator<Real>& op) {
  return hermitian_eigensolve(op.matrix);
}

}  // namespace rydstirap
