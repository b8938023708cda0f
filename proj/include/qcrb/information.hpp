#pragma once

#include <vector>

#include "qcrb/matkit.hpp"
#include "qcrb/quantum.hpp"

namespace qcrb {

enum class InfoKind { helstrom, fisher, target, scaled_mqe, mqe, cost };

// Real symmetric parameter-space matrix with a role tag.
struct InfoMatrix {
  RealSymMatrix mat;
  InfoKind kind = InfoKind::fisher;

  InfoMatrix() = default;
  InfoMatrix(RealSymMatrix m, InfoKind k) : mat(std::move(m)), kind(k) {}
  std::size_t dim() const { return mat.dim(); }
  double operator()(std::size_t i, std::size_t j) const { return mat(i, j); }
};

// Symmetric logarithmic derivative: solves (λρ + ρλ)/2 = dρ in the eigenbasis
// of ρ, λ_kl = 2 dρ_kl / (p_k + p_l). Eigenvalue pairs whose sum is at or
// below the support floor must carry no derivative weight (|dρ_kl| ≤ 1e-9);
// otherwise the chart has left the state's support and a singular-model error
// is raised.
HermitianMatrix sld(const HermitianMatrix& rho, const HermitianMatrix& drho,
                    double support_floor = kTol.psd_floor);

std::vector<HermitianMatrix> sld_set(const ParametricModel& model,
                                     const std::vector<double>& theta);

// Quantum information matrix H_ij = tr ρ (λᵢλⱼ + λⱼλᵢ)/2.
InfoMatrix helstrom_matrix(const ParametricModel& model, const std::vector<double>& theta);

// Fisher information of a POVM on n copies:
//   I_ij = Σ_ξ tr(∂ᵢρ⁽ⁿ⁾ M_ξ) tr(∂ⱼρ⁽ⁿ⁾ M_ξ) / tr(ρ⁽ⁿ⁾ M_ξ).
// Outcomes with probability below the floor contribute nothing when their
// numerator traces also vanish (≤ 1e-9); a vanishing probability with a live
// numerator is a singular-outcome error.
InfoMatrix fisher_information(const Povm& m, const ParametricModel& model,
                              const std::vector<double>& theta, std::size_t n_copies);

// tr(H⁻¹ I), the scalar compared against n·(d−1).
double gill_massar_trace(const InfoMatrix& helstrom, const InfoMatrix& fisher);

struct BoundCheck {
  bool holds = false;
  double min_eigenvalue = 0.0;  // of n·H − I
};

// Matrix bound I ≤ n·H.
BoundCheck helstrom_bound_check(const InfoMatrix& fisher, const InfoMatrix& helstrom,
                                std::size_t n_copies);

struct PartialTraceBound {
  double lhs = 0.0;
  double bound = 0.0;
};

// Sub-model bound: Σ_{i,j ∈ subset} (H⁻¹)_ij I_ij ≤ n (tr Π − 1) for a
// projector Π commuting with ρ whose range supports the subset derivatives.
PartialTraceBound partial_trace_bound(const Povm& m, const ParametricModel& model,
                                      const std::vector<double>& theta,
                                      const std::vector<std::size_t>& subset,
                                      const HermitianMatrix& projector);

struct RefinementCheck {
  InfoMatrix before;
  InfoMatrix after;
  bool holds = false;  // after − before ⪰ −1e-9
};

// Refining a POVM to rank-one parts never loses Fisher information.
RefinementCheck refinement_monotonicity_check(const Povm& m, const ParametricModel& model,
                                              const std::vector<double>& theta);

}  // namespace qcrb
