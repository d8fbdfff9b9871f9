#include "rydstirap/core.hpp"

namespace rydstirap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kBasisMismatch: return "basis mismatch";
    case ErrorCode::kNotHermitian: return "not hermitian";
    case ErrorCode::kUndefinedMixingAngle: return "undefined mixing angle";
    case ErrorCode::kNonAdiabaticSchedule: return "non-adiabatic schedule";
    case ErrorCode::kNoJxZeroState: return "no J_x=0 state";
    case ErrorCode::kStepUnderflow: return "step-size underflow";
    case ErrorCode::kNonFiniteAmplitude: return "non-finite amplitude";
    case ErrorCode::kAdiabaticityLost: return "adiabaticity lost";
    case ErrorCode::kPhaseSampling: return "phase sampling too coarse";
    case ErrorCode::kIntegratorUnstable: return "integrator unstable";
    case ErrorCode::kConfig: return "config error";
    case ErrorCode::kIo: return "i/o error";
  }
  return "unknown error";
}

std::string BasisLabel::name() const {
  switch (kind) {
    case BasisKind::kSingleAtomLadder:
      if (n1 == 1) return "|1>";
      if (n2 == 1) return "|2>";
      return "|r>";
    case BasisKind::kTwoAtomSymmetric: {
      // One letter per occupied level, lowest level first.
      std::string s;
      s.append(static_cast<std::size_t>(n1), '1');
      s.append(static_cast<std::size_t>(n2), '2');
      s.append(static_cast<std::size_t>(nr), 'r');
      if (s[0] != s[1]) return "|" + s + "+" + std::string{s[1], s[0]} + ">";
      return "|" + s + ">";
    }
    case BasisKind::kCollective:
      return "|" + std::to_string(n1) + ":" + std::to_string(n2) + ":" + std::to_string(nr) + ">";
    case BasisKind::kGroundRegister:
      return "|n0=" + std::to_string(n0) + ":n1=" + std::to_string(n1) + ">";
  }
  return "?";
}

Basis Basis::single_atom_ladder() {
  using K = BasisKind;
  return Basis({{K::kSingleAtomLadder, 0, 1, 0, 0},
                {K::kSingleAtomLadder, 0, 0, 1, 0},
                {K::kSingleAtomLadder, 0, 0, 0, 1}});
}

Basis Basis::two_atom_symmetric() {
  constexpr auto k = BasisKind::kTwoAtomSymmetric;
  return Basis({{k, 0, 2, 0, 0},
                {k, 0, 1, 0, 1},
                {k, 0, 1, 1, 0},
                {k, 0, 0, 0, 2},
                {k, 0, 0, 1, 1},
                {k, 0, 0, 2, 0}});
}

Basis Basis::collective(int atoms, int max_rydberg) {
  if (atoms < 0 || max_rydberg < 0) {
    throw Error(ErrorCode::kInvalidArgument, "collective basis needs non-negative atom and Rydberg counts");
  }
  std::vector<BasisLabel> labels;
  for (int nr = 0; nr <= std::min(max_rydberg, atoms); ++nr) {
    for (int n2 = 0; n2 <= atoms - nr; ++n2) {
      labels.push_back({BasisKind::kCollective, 0, atoms - nr - n2, n2, nr});
    }
  }
  return Basis(std::move(labels));
}

Basis Basis::ground_register(int atoms) {
  std::vector<BasisLabel> labels;
  for (int n1 = 0; n1 <= atoms; ++n1) labels.push_back({BasisKind::kGroundRegister, atoms - n1, n1, 0, 0});
  return Basis(std::move(labels));
}

std::optional<Eigen::Index> Basis::find(const BasisLabel& label) const {
  const auto it = std::find(labels_->begin(), labels_->end(), label);
  if (it == labels_->end()) return std::nullopt;
  return static_cast<Eigen::Index>(it - labels_->begin());
}

Eigen::Index Basis::index_of(const BasisLabel& label) const {
  if (auto i = find(label)) return *i;
  throw Error(ErrorCode::kBasisMismatch, "label " + label.name() + " is not in the basis");
}

}  // namespace rydstirap
