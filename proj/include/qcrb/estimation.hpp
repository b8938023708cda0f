#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "qcrb/design.hpp"
#include "qcrb/information.hpp"
#include "qcrb/quantum.hpp"
#include "qcrb/rng.hpp"

namespace qcrb {

enum class OutOfBallPolicy { project, discard };
enum class AllocationMode { deterministic, multinomial };
enum class ModelKind { mixed_full, pure_full };
enum class TargetKind { scaled_information, cost };

// Two-stage protocol configuration. The target callable returns, at the
// stage-one estimate, either the desired single-copy information matrix G(θ)
// or a cost matrix C(θ) that is converted through optimal_scaled_mqe. For the
// mixed model the matrix lives in the Bloch chart (3×3); for the pure model it
// lives in the tangent chart at the estimate (2×2, where H = identity).
struct ProtocolConfig {
  std::uint64_t total_copies = 0;  // N
  double stage1_exponent = 0.7;    // a; stage 1 uses 3·⌈N^a/3⌉ copies
  OutOfBallPolicy policy = OutOfBallPolicy::project;
  AllocationMode allocation = AllocationMode::deterministic;
  ModelKind model = ModelKind::mixed_full;
  TargetKind target_kind = TargetKind::scaled_information;
  std::uint64_t master_seed = 0;
  std::function<InfoMatrix(const BlochVector&)> target;
};

std::uint64_t stage1_copies(const ProtocolConfig& config);

// Checks the static invariants and probes the target callable for
// admissibility on a 1000-point sample of the model domain.
void validate_protocol_config(const ProtocolConfig& config);

struct Stage1Counts {
  // tallies[axis][0] = "+1" outcomes, tallies[axis][1] = "−1" outcomes for the
  // spin measurements along x, y, z.
  std::array<std::array<std::uint64_t, 2>, 3> tallies{};
};

struct Stage1Result {
  BlochVector theta_tilde;
  bool discarded = false;
};

// Linear inversion of the per-axis frequencies r̃ᵢ = (n₊ᵢ − n₋ᵢ)/(n₊ᵢ + n₋ᵢ).
// A raw estimate outside the ball is projected to radius 1−1e-6 or discarded
// per policy (mixed model); the pure model always projects to the unit sphere
// (to ẑ if the raw estimate is zero).
Stage1Result stage1_estimate(const Stage1Counts& counts, OutOfBallPolicy policy,
                             ModelKind model);

// Moment inversion of the stage-two frequencies: θ̂ = H^{−1/2} Σᵢ ‖gᵢ‖ η̂ᵢ fᵢ
// with H evaluated at the design point, projected to the unit ball if the raw
// solution leaves it.
BlochVector stage2_estimate(const MixedQubitDesign& design,
                            const std::array<double, 3>& frequencies);

// Exact conditional MQE of the stage-two estimator when the design was built
// at θ̃ but the copies carry state θ⁰, with N' stage-two copies:
//   V = (1/N') Σᵢ (1/γᵢ)(1 − (θ⁰·mᵢ)²) ‖gᵢ‖² · (H^{−1/2}fᵢ)(H^{−1/2}fᵢ)ᵀ.
InfoMatrix conditional_mqe(const MixedQubitDesign& design, const BlochVector& theta_true,
                           std::uint64_t stage2_copies);

struct TrialResult {
  BlochVector theta_true;
  BlochVector theta_tilde;
  BlochVector theta_hat;
  bool discarded = false;
  std::array<std::uint64_t, 3> direction_copies{};  // Xᵢ (pure designs use 2)
  std::array<double, 3> frequencies{};              // η̂ᵢ
};

// One full protocol run: stage-one tomography, design at θ̃, stage-two
// measurement and inversion. Randomness comes from the stream derived from
// (master seed, trial index), so trials are reproducible individually and
// independent of scheduling.
TrialResult run_protocol(const ProtocolConfig& config, const BlochVector& theta_true,
                         std::uint64_t trial_index);

struct MqeEstimate {
  InfoMatrix v_hat;        // second-moment error matrix E[(θ̂−θ)(θ̂−θ)ᵀ]
  RealSymMatrix stderrs;   // entrywise Monte Carlo standard errors
  std::uint64_t trials = 0;
  double discard_rate = 0.0;
};

MqeEstimate monte_carlo_mqe(const ProtocolConfig& config, const BlochVector& theta_true,
                            std::uint64_t trials, unsigned n_threads = 1);

// Fidelity cost cos²(ω/2) = (1 + a·b)/2 between two unit directions.
double direction_fidelity_cost(const BlochVector& a, const BlochVector& b);

struct CovariantResult {
  double mean_cost = 0.0;  // Monte Carlo mean of cos²(ω̂/2)
  double std_error = 0.0;
  std::uint64_t trials = 0;
};

// Covariant pure-state experiment: uniformly random true directions, the
// two-stage protocol targeting the fidelity cost (C = H/4 in the tangent
// chart), mean fidelity cost of the estimated direction.
CovariantResult covariant_cost_experiment(std::uint64_t total_copies, std::uint64_t trials,
                                          std::uint64_t master_seed,
                                          double stage1_exponent = 0.5,
                                          unsigned n_threads = 1);

struct GridSpec {
  std::vector<double> lo;
  std::vector<double> hi;
  double step = 0.0;
};

// Exhaustive log-likelihood maximization over a rectangular grid intersected
// with the model domain; ties break to the lowest lexicographic index.
std::vector<double> grid_mle(const Povm& m, const ParametricModel& model,
                             const std::vector<std::uint64_t>& counts, const GridSpec& grid);

}  // namespace qcrb
