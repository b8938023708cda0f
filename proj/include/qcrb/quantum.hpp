#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcrb/matkit.hpp"
#include "qcrb/rng.hpp"

namespace qcrb {

struct BlochVector {
  std::array<double, 3> r{0.0, 0.0, 0.0};

  BlochVector() = default;
  BlochVector(double x, double y, double z) : r{x, y, z} {}

  double norm() const { return std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]); }
  double dot(const BlochVector& o) const {
    return r[0] * o.r[0] + r[1] * o.r[1] + r[2] * o.r[2];
  }
  BlochVector scaled(double s) const { return {r[0] * s, r[1] * s, r[2] * s}; }
  std::vector<double> to_vector() const { return {r[0], r[1], r[2]}; }
  static BlochVector from_vector(const std::vector<double>& v);
};

HermitianMatrix pauli_x();
HermitianMatrix pauli_y();
HermitianMatrix pauli_z();
HermitianMatrix pauli(std::size_t axis);  // 0 → x, 1 → y, 2 → z

// ρ = (I + r·σ)/2; requires ‖r‖ ≤ 1.
HermitianMatrix density_from_bloch(const BlochVector& r);

// Spin-1/2 projector onto direction ±m: (I ± m·σ)/2 for unit m.
HermitianMatrix spin_projector(const std::array<double, 3>& m, int sign);

// Unit spinor with Bloch vector n (‖n‖ = 1).
std::vector<cplx> spinor(const BlochVector& n);
// Orthogonal partner with the fixed phase convention (a,b) → (−conj(b), conj(a)).
std::vector<cplx> orthogonal_spinor(const std::vector<cplx>& psi0);

// Differentiable family of density matrices over an open parameter domain.
struct ParametricModel {
  std::size_t hilbert_dim = 0;
  std::size_t param_dim = 0;
  std::string chart_name;
  std::function<HermitianMatrix(const std::vector<double>&)> rho;
  std::function<HermitianMatrix(const std::vector<double>&, std::size_t)> drho;
  std::function<bool(const std::vector<double>&)> in_domain;
};

// Full-parameter qubit chart: ρ(θ) = (I + θ·σ)/2, ∂ᵢρ = σᵢ/2, domain ‖θ‖ < 1.
ParametricModel full_mixed_qubit();

// Pure qubit in polar coordinates (η, φ): |ψ⟩ = cos(η/2)|0⟩ + sin(η/2)e^{iφ}|1⟩,
// domain 0 < η < π (the quantum information matrix degenerates at the poles).
ParametricModel pure_qubit_polar();

// Local tangent chart at a pure qubit state: |ψ(θ)⟩ ∝ |ψ⁰⟩ + ½(θ₁+iθ₂)|ψ¹⟩,
// normalized exactly; the ½ makes the quantum information matrix the identity
// at θ = 0. ψ¹ must be a unit vector orthogonal to ψ⁰.
ParametricModel pure_qubit_tangent(const std::vector<cplx>& psi0, const std::vector<cplx>& psi1);

// Pure qudit tangent chart at |1⟩ with 2(d−1) parameters ordered
// (θ_{2+}, θ_{2−}, θ_{3+}, θ_{3−}, …); derivatives at 0 are
// ρ_{,k+} = |1⟩⟨k| + |k⟩⟨1| and ρ_{,k−} = i|1⟩⟨k| − i|k⟩⟨1|, so the quantum
// information matrix is 4·I at the reference point.
ParametricModel pure_qudit_tangent(std::size_t d);

// Full-parameter mixed qudit chart around a full-rank base state:
// ρ(θ) = ρ0 + Σ θᵢ Tᵢ with Tᵢ the generalized Gell-Mann directions
// (off-diagonal pairs matching the pure-chart derivatives, then diagonal).
ParametricModel full_mixed_qudit(const HermitianMatrix& rho0);

// The generalized Gell-Mann tangent directions used by full_mixed_qudit.
std::vector<HermitianMatrix> gell_mann_directions(std::size_t d);

struct Povm {
  std::size_t dim = 0;     // Hilbert dimension the elements act on (d^copies)
  std::size_t copies = 1;  // number of copies of the base system
  std::vector<HermitianMatrix> elements;
  std::vector<std::string> labels;
};

Povm make_povm(std::size_t dim, std::size_t copies, std::vector<HermitianMatrix> elements,
               std::vector<std::string> labels = {});

struct PovmReport {
  std::vector<double> element_min_eigenvalues;
  double completeness_residual = 0.0;
  bool pass = false;
};

// Diagnostic validation: every element PSD within the floor and ΣM = I within
// the reconstruction tolerance.
PovmReport validate_povm(const Povm& m);

// Born probabilities tr(ρ·M_ξ); tiny negative values (≥ −1e-12) are clamped
// to zero and the vector renormalized; anything worse is a domain error.
std::vector<double> outcome_distribution(const Povm& m, const HermitianMatrix& rho);

// Spectral refinement: each element is split into its rank-one eigenparts.
Povm refine_to_rank1(const Povm& m);

struct TensorPowerState {
  HermitianMatrix rho;                 // ρ(θ)^{⊗n}
  std::vector<HermitianMatrix> drho;   // Leibniz derivatives of the power
};

TensorPowerState tensor_power_state(const ParametricModel& model, const std::vector<double>& theta,
                                    std::size_t n_copies, std::size_t cap = kTensorDimCap);

// Elementwise Kronecker product POVM with Cartesian outcome labels.
Povm product_povm(const std::vector<Povm>& factors, std::size_t cap = kTensorDimCap);

// Draw one outcome index from the Born distribution.
std::size_t sample_outcome(const Povm& m, const HermitianMatrix& rho, RngStream& rng);

nlohmann::json povm_to_json(const Povm& m);
Povm povm_from_json(const nlohmann::json& j);

}  // namespace qcrb
