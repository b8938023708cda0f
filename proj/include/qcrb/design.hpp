#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "json.hpp"
#include "qcrb/information.hpp"
#include "qcrb/quantum.hpp"

namespace qcrb {

struct OptimalMqe {
  InfoMatrix w_opt;       // scaled MQE matrix attaining the minimum cost
  double min_cost = 0.0;  // tr(C · W_opt)
};

// Minimizes tr(C·W) over scaled MQE matrices W ≻ 0 subject to the information
// budget tr(H⁻¹W⁻¹) = d−1. The minimizer is
//   W = (t/(d−1)) · H^{−1/2} (H^{−1/2} C H^{−1/2})^{−1/2} H^{−1/2},
//   t = tr √(H^{−1/2} C H^{−1/2}),   min cost = t²/(d−1),
// computed from the H side, or from the equivalent C-side form
//   W = (t/(d−1)) · C^{−1/2} (C^{1/2} H⁻¹ C^{1/2})^{1/2} C^{−1/2}
// when C is the better-conditioned factor.
OptimalMqe optimal_scaled_mqe(const InfoMatrix& cost, const InfoMatrix& helstrom,
                              std::size_t hilbert_dim);

struct TargetCheck {
  bool admissible = false;
  double trace = 0.0;  // tr(H⁻¹ G)
};

// A single-copy qubit information target G is admissible when it is PSD and
// fits the unit information budget tr(H⁻¹G) ≤ 1.
TargetCheck validate_target(const InfoMatrix& target, const InfoMatrix& helstrom);

// Measurement design for the full mixed-qubit model at interior point θ⁰:
// diagonalize F = H^{−1/2} G H^{−1/2} = Σᵢ γᵢ fᵢfᵢᵀ, push the frame through
// gᵢ = H^{1/2}fᵢ, and measure spin along mᵢ = gᵢ/‖gᵢ‖ a fraction γᵢ of the
// time. The realized single-copy Fisher information is exactly G.
struct MixedQubitDesign {
  BlochVector theta0;
  std::array<double, 3> gammas{};                     // measurement fractions
  std::array<std::array<double, 3>, 3> eigvecs{};     // fᵢ (orthonormal)
  std::array<BlochVector, 3> directions{};            // mᵢ (unit spin axes)
  std::array<double, 3> gnorms{};                     // ‖gᵢ‖
};

MixedQubitDesign design_mixed_qubit(const InfoMatrix& target, const BlochVector& theta0);

// Measurement design for the pure-qubit tangent chart at ψ⁰ (where the
// information matrix is the identity): diagonalize G = Σᵢ γᵢ fᵢfᵢᵀ with a
// rotation of angle λ and measure the zero-diagonal observables
//   A₁ = |ψ⁰⟩⟨ψ¹'| + |ψ¹'⟩⟨ψ⁰|,  A₂ = i(|ψ⁰⟩⟨ψ¹'| − |ψ¹'⟩⟨ψ⁰|),
//   |ψ¹'⟩ = e^{iλ}|ψ¹⟩,
// with probabilities γ₁, γ₂.
struct PureQubitDesign {
  std::vector<cplx> psi0;
  std::vector<cplx> psi1;         // fixed orthogonal companion of ψ⁰
  double rotation = 0.0;          // λ
  std::array<double, 2> probs{};  // γ₁, γ₂
  HermitianMatrix a1;
  HermitianMatrix a2;
};

PureQubitDesign design_pure_qubit(const InfoMatrix& target, const std::vector<cplx>& psi0);

// Weighted projective POVMs realizing a design:
// {γᵢ P₊mᵢ, γᵢ P₋mᵢ : γᵢ > 0} plus a (1 − Σγᵢ)·identity remainder.
Povm realize_povm(const MixedQubitDesign& design);
Povm realize_povm(const PureQubitDesign& design);

// Seven-element collective POVM on two qubit copies whose Fisher information
// at the maximally mixed point is identity(3): for each axis a ∈ {x,y,z} the
// elements ½ P₊ₐ⊗P₊ₐ and ½ P₋ₐ⊗P₋ₐ, plus the singlet projector. Exceeds the
// separable-measurement information budget (trace 3 > 2).
Povm counterexample_povm();

// Closed-form powers of the full mixed-qubit information matrix
// H(θ) = I + θθᵀ/(1−‖θ‖²):  H^s = I + ((1−‖θ‖²)^{−s} − 1)·uuᵀ, u = θ/‖θ‖.
RealSymMatrix mixed_qubit_helstrom_power(const BlochVector& theta, double s);

nlohmann::json design_to_json(const MixedQubitDesign& design);
MixedQubitDesign design_from_json(const nlohmann::json& j);

}  // namespace qcrb
