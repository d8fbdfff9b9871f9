#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "rydstirap/core.hpp"
#include "rydstirap/models.hpp"

namespace rydstirap {
namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
const double kOmega = angular_from_mhz(10.0);
const double kE = angular_from_mhz(100.0);

double max_abs(const VectorXc& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

// Overlapping pulses with a phase ramp running through the overlap, so every
// coupling is nonzero and complex somewhere in the span.
DriveSchedule ramped_schedule(double phase0, double delta) {
  PhaseProfile phase(phase0);
  phase.add_ramp(0.5, 3.5, delta);
  return DriveSchedule({PulseEnvelope{kOmega, 1.1, 1.5}}, {PulseEnvelope{0.8 * kOmega, 0.0, 1.5}}, phase, 0.0,
                       4.1);
}

// The two-atom matrix written out element by element with all-positive
// couplings and Omega_r -> Omega_r e^{-i phi}.
MatrixXc literal_two_atom(double o1, double orr, double phi, double e) {
  const cd r = orr * std::exp(cd(0.0, -phi));
  const double s2 = std::sqrt(2.0);
  MatrixXc m(6, 6);
  // clang-format off
  m << 0,       0,            s2 * o1, 0,                  0,                  0,
       0,       0,            std::conj(r), 0,             o1,                 0,
       s2 * o1, r,            0,       0,                  0,                  s2 * o1,
       0,       0,            0,       2 * e,              s2 * std::conj(r),  0,
       0,       o1,           0,       s2 * r,             0,                  s2 * std::conj(r),
       0,       0,            s2 * o1, 0,                  s2 * r,             0;
  // clang-format on
  return 0.5 * m;
}

// ---------------------------------------------------------------------------

TEST(SingleAtom, DarkStateIsNullVector) {
  for (double theta : {0.0, kPi / 4, kPi / 3}) {
    for (double phi : {0.0, 0.7, -2.0}) {
      const Operator h = single_atom_hamiltonian(kOmega * std::sin(theta), kOmega * std::cos(theta), phi);
      const StateVector d = single_atom_dark_state(theta, phi);
      EXPECT_LT(max_abs(h.matrix * d.amplitudes()), 1e-12) << theta << " " << phi;
    }
  }
}

TEST(SingleAtom, AnalyticSpectrum) {
  const auto d = hermitian_eigensolve(single_atom_hamiltonian(kOmega, kOmega, 0.3));
  EXPECT_NEAR(d.eigenvalues(0), -kOmega / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(d.eigenvalues(1), 0.0, 1e-12);
  EXPECT_NEAR(d.eigenvalues(2), kOmega / std::sqrt(2.0), 1e-12);
  EXPECT_TRUE(single_atom_hamiltonian(0.0, 0.0, 1.0).matrix.isZero(0.0));
}

TEST(TwoAtom, MatchesLiteralMatrix) {
  const Basis b = Basis::two_atom_symmetric();
  const MatrixXc theta = parity_operator(b).matrix;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ut(0.0, 4.1), uphi(-kPi, kPi), ue(0.0, angular_from_mhz(400.0));
  for (int k = 0; k < 50; ++k) {
    const DriveSchedule s = ramped_schedule(uphi(rng), uphi(rng));
    const double t = ut(rng), e = ue(rng);
    const MatrixXc h = two_atom_hamiltonian(TwoAtomModel{e, 0.0, s}, t).matrix;
    const MatrixXc expected = theta * literal_two_atom(s.omega1(t), s.omega_r(t), s.phase(t), e) * theta;
    EXPECT_LT((h - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(TwoAtom, Entries) {
  const DriveSchedule s = ramped_schedule(0.0, 0.0);
  const double t = 2.0;
  const MatrixXc h = two_atom_hamiltonian(TwoAtomModel{kE, 0.0, s}, t).matrix;
  EXPECT_NEAR(std::abs(h(2, 0)), std::sqrt(2.0) / 2 * s.omega1(t), 1e-12);
  EXPECT_NEAR(h(2, 0).real(), -std::sqrt(2.0) / 2 * s.omega1(t), 1e-12);
  EXPECT_EQ(h(3, 3), cd(kE));
}

TEST(TwoAtom, DecayOnDiagonal) {
  const DriveSchedule s = ramped_schedule(0.0, 0.0);
  const double gamma = 0.01;
  const MatrixXc h = two_atom_hamiltonian(TwoAtomModel{kE, gamma, s}, 2.0).matrix;
  EXPECT_NEAR(h(1, 1).imag(), -0.5 * gamma, 1e-15);
  EXPECT_NEAR(h(3, 3).imag(), -gamma, 1e-15);
  EXPECT_NEAR(h(3, 3).real(), kE, 1e-12);
  EXPECT_EQ(h(0, 0), cd(0.0));
  EXPECT_EQ(h(5, 5), cd(0.0));
}

TEST(TwoAtom, DarkStateAlongSchedule) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> ut(1e-3, 4.1 - 1e-3), uphi(-kPi, kPi), ue(0.0, angular_from_mhz(400.0));
  for (int k = 0; k < 100; ++k) {
    const DriveSchedule s = ramped_schedule(uphi(rng), uphi(rng));
    const double t = ut(rng);
    const MatrixXc h = two_atom_hamiltonian(TwoAtomModel{ue(rng), 0.0, s}, t).matrix;
    const StateVector d = two_atom_dark_state(s.mixing_angle(t), s.phase(t));
    EXPECT_LT(max_abs(h * d.amplitudes()), 1e-12);
  }
}

TEST(TwoAtom, DarkStateValues) {
  const StateVector d0 = two_atom_dark_state(0.0, 1.0);
  EXPECT_NEAR(std::abs(d0[0]), 1.0, 1e-15);

  const StateVector d1 = two_atom_dark_state(kPi / 2, 0.4);
  EXPECT_NEAR(d1[0].real(), -1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(d1[5].real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(d1[1]), 0.0, 1e-15);

  const StateVector dq = two_atom_dark_state(kPi / 4, 0.0);
  const double expected[6] = {0.0, -std::sqrt(2.0 / 3.0), 0.0, 0.0, 0.0, 1 / std::sqrt(3.0)};
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(std::abs(dq[i] - expected[i]), 0.0, 1e-15) << i;
}

TEST(Collective, TwoAtomsWithTwoExcitationsMatchPairModel) {
  const Basis cb = Basis::collective(2, 2);
  const Basis tb = Basis::two_atom_symmetric();
  // |n1:n2:nr> -> position in the pair basis
  const BasisLabel order[6] = {{BasisKind::kCollective, 0, 2, 0, 0}, {BasisKind::kCollective, 0, 1, 0, 1},
                               {BasisKind::kCollective, 0, 1, 1, 0}, {BasisKind::kCollective, 0, 0, 0, 2},
                               {BasisKind::kCollective, 0, 0, 1, 1}, {BasisKind::kCollective, 0, 0, 2, 0}};
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> ut(0.0, 4.1), uphi(-kPi, kPi);
  for (int k = 0; k < 20; ++k) {
    const DriveSchedule s = ramped_schedule(uphi(rng), uphi(rng));
    const double t = ut(rng);
    const MatrixXc c = collective_hamiltonian(CollectiveModel{2, 2, kE, 0.01, s}, t).matrix;
    const MatrixXc p = two_atom_hamiltonian(TwoAtomModel{kE, 0.01, s}, t).matrix;
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        EXPECT_NEAR(std::abs(c(cb.index_of(order[i]), cb.index_of(order[j])) - p(i, j)), 0.0, 1e-12);
      }
    }
  }
  EXPECT_EQ(tb.size(), cb.size());
}

TEST(Collective, JaynesCummingsEdge) {
  // Before the lower pulse starts only Omega_r acts.
  const DriveSchedule s = stirap_schedule(kOmega, kOmega, 1.5, 1.1, 0.0, false);
  const int n = 6;
  for (double t : {0.3, 0.7, 1.0}) {
    const Operator h = collective_hamiltonian(CollectiveModel{n, 1, 0.0, 0.0, s}, t);
    ASSERT_EQ(h.matrix.rows(), 13);
    const auto d = hermitian_eigensolve(h);
    std::vector<double> expected{0.0};
    for (int n2 = 0; n2 < n; ++n2) {
      expected.push_back(0.5 * s.omega_r(t) * std::sqrt(n2 + 1.0));
      expected.push_back(-0.5 * s.omega_r(t) * std::sqrt(n2 + 1.0));
    }
    std::sort(expected.begin(), expected.end());
    for (int i = 0; i < 13; ++i) EXPECT_NEAR(d.eigenvalues(i), expected[std::size_t(i)], 1e-10);
  }
}

TEST(Collective, DarkStateExists) {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> uth(0.0, kPi / 2), uphi(-kPi, kPi);
  for (int n = 1; n <= 10; ++n) {
    for (int k = 0; k < 10; ++k) {
      const double theta = uth(rng), phi = uphi(rng);
      PhaseProfile p(phi);
      const DriveSchedule s({PulseEnvelope{kOmega * std::sin(theta), 0.0, 1.0}},
                            {PulseEnvelope{kOmega * std::cos(theta), 0.0, 1.0}}, p, 0.0, 2.0);
      const MatrixXc h = collective_hamiltonian(CollectiveModel{n, 1, 0.0, 0.0, s}, 1.0).matrix;
      const StateVector d = collective_dark_state(n, theta, phi);
      EXPECT_NEAR(d.squared_norm(), 1.0, 1e-12);
      EXPECT_LT(max_abs(h * d.amplitudes()), 1e-10 * h.norm()) << n << " " << theta;
    }
  }
}

TEST(Collective, DarkStateLimits) {
  const StateVector d = collective_dark_state(5, 0.0, 0.3);
  EXPECT_NEAR(std::norm(d.amplitude({BasisKind::kCollective, 0, 5, 0, 0})), 1.0, 1e-12);
  // N = 2 at theta = pi/2 reduces to the pair result up to a global phase
  const StateVector d2 = collective_dark_state(2, kPi / 2, 0.0);
  EXPECT_NEAR(std::norm(d2.amplitude({BasisKind::kCollective, 0, 2, 0, 0})), 0.5, 1e-12);
  EXPECT_NEAR(std::norm(d2.amplitude({BasisKind::kCollective, 0, 0, 2, 0})), 0.5, 1e-12);
  // one atom: same as the ladder dark state
  const StateVector d1 = collective_dark_state(1, 0.6, 0.9);
  const StateVector ref = single_atom_dark_state(0.6, 0.9);
  EXPECT_NEAR(std::abs(d1.amplitude({BasisKind::kCollective, 0, 1, 0, 0}) - ref[0]), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(d1.amplitude({BasisKind::kCollective, 0, 0, 0, 1}) - ref[2]), 0.0, 1e-12);
}

TEST(Collective, ParityAntiCommutes) {
  const DriveSchedule s = ramped_schedule(0.2, 1.3);
  for (int n : {3, 6}) {
    const Basis b = Basis::collective(n, 1);
    const MatrixXc theta = parity_operator(b).matrix;
    const MatrixXc h = collective_hamiltonian(CollectiveModel{n, 1, kE, 0.0, s}, 2.0).matrix;
    EXPECT_LT((theta * h + h * theta).cwiseAbs().maxCoeff(), 1e-12);

    const Basis b2 = Basis::collective(n, 2);
    const MatrixXc theta2 = parity_operator(b2).matrix;
    const MatrixXc h2 = collective_hamiltonian(CollectiveModel{n, 2, kE, 0.0, s}, 2.0).matrix;
    EXPECT_GT((theta2 * h2 + h2 * theta2).cwiseAbs().maxCoeff(), 1.0);
  }
}

TEST(Model, ApplyMatchesMatrix) {
  std::mt19937 rng(17);
  std::normal_distribution<double> g;
  const DriveSchedule s = ramped_schedule(0.4, -1.0);
  const HamiltonianModel models[] = {single_atom_model(s, 0.02), make_model(TwoAtomModel{kE, 0.01, s}),
                                     make_model(CollectiveModel{7, 2, kE, 0.01, s})};
  for (const auto& m : models) {
    for (double t : {0.0, 0.9, 2.0, 3.3}) {
      VectorXc psi(m.dimension());
      for (auto& x : psi) x = {g(rng), g(rng)};
      VectorXc out(m.dimension());
      m.apply(t, psi, out);
      EXPECT_LT(max_abs(out - m.matrix(t) * psi), 1e-11);
    }
    EXPECT_LT(hermiticity_residual(m.without_decay().matrix(2.0)), 1e-14);
  }
}

TEST(Model, RejectsNegativeRates) {
  const DriveSchedule s = ramped_schedule(0.0, 0.0);
  EXPECT_THROW((void)make_model(TwoAtomModel{-1.0, 0.0, s}), Error);
  EXPECT_THROW((void)make_model(TwoAtomModel{kE, -0.1, s}), Error);
  EXPECT_THROW((void)make_model(CollectiveModel{0, 1, kE, 0.0, s}), Error);
  EXPECT_THROW((void)make_model(CollectiveModel{3, 3, kE, 0.0, s}), Error);
}

// ---------------------------------------------------------------------------

TEST(Jx, Eigenvalues) {
  EXPECT_EQ(jx_eigenvalues(0, 1.0), std::vector<double>{0.0});
  EXPECT_EQ(jx_eigenvalues(2, 1.0), (std::vector<double>{-1.0, 0.0, 1.0}));
  EXPECT_EQ(jx_eigenvalues(3, 1.0), (std::vector<double>{-1.5, -0.5, 0.5, 1.5}));
}

TEST(Jx, ZeroStateSmall) {
  const StateVector z0 = jx_zero_state(0);
  EXPECT_EQ(z0.size(), 1);
  EXPECT_NEAR(std::abs(z0[0]), 1.0, 1e-15);
  const StateVector z2 = jx_zero_state(2);
  EXPECT_NEAR(z2[0].real(), -1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(z2[1]), 0.0, 1e-15);
  EXPECT_NEAR(z2[2].real(), 1 / std::sqrt(2.0), 1e-15);
}

// J_x from the angular-momentum ladder, j = K/2, m = j - n2.
MatrixXc jx_from_ladder(int k) {
  const double j = 0.5 * k;
  MatrixXc jx = MatrixXc::Zero(k + 1, k + 1);
  for (int n2 = 0; n2 < k; ++n2) {
    const double m = j - n2;  // J_- takes m to m - 1, i.e. n2 to n2 + 1
    const double lowering = std::sqrt(j * (j + 1) - m * (m - 1));
    jx(n2 + 1, n2) = 0.5 * lowering;
    jx(n2, n2 + 1) = 0.5 * lowering;
  }
  return jx;
}

TEST(Jx, ZeroStateMatchesEigensolve) {
  for (int k : {4, 6, 10}) {
    const auto d = hermitian_eigensolve(jx_from_ladder(k));
    const VectorXc ref = d.eigenvectors.col(k / 2);
    EXPECT_NEAR(d.eigenvalues(k / 2), 0.0, 1e-12);
    const StateVector z = jx_zero_state(k);
    EXPECT_NEAR(std::abs(ref.dot(z.amplitudes())), 1.0, 1e-12) << k;
    EXPECT_GT(z[k].real(), 0.0);
  }
}

TEST(Jx, OddHasNoZeroState) {
  try {
    (void)jx_zero_state(3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoJxZeroState);
  }
}

TEST(FinalDarkState, Examples) {
  const StateVector d2 = final_dark_state(2);
  EXPECT_NEAR(d2.amplitude({BasisKind::kCollective, 0, 2, 0, 0}).real(), -1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(d2.amplitude({BasisKind::kCollective, 0, 0, 2, 0}).real(), 1 / std::sqrt(2.0), 1e-15);

  const StateVector d1 = final_dark_state(1);
  EXPECT_NEAR(std::norm(d1.amplitude({BasisKind::kCollective, 0, 0, 0, 1})), 1.0, 1e-15);
  // sign of the single-atom dark state at theta = pi/2
  EXPECT_NEAR(std::abs(inner_product(d1, collective_dark_state(1, kPi / 2, 0.0))), 1.0, 1e-12);

  const StateVector d4 = final_dark_state(4);
  for (Eigen::Index i = 0; i < d4.size(); ++i) {
    if (d4.basis()[i].nr > 0) EXPECT_EQ(d4[i], cd(0.0));
  }
  EXPECT_NEAR(d4.rydberg_population(), 0.0, 1e-15);
  EXPECT_NEAR(final_dark_state(5).rydberg_population(), 1.0, 1e-15);
}

TEST(FinalDarkState, IsCollectiveDarkStateAtEnd) {
  for (int n = 1; n <= 8; ++n) {
    const double f = fidelity(final_dark_state(n), collective_dark_state(n, kPi / 2, 0.0));
    EXPECT_NEAR(f, 1.0, 1e-10) << n;
  }
}

}  // namespace
}  // namespace rydstirap
