#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcrb/estimation.hpp"

namespace qcrb {

// Declarative description of one CLI run. Every command is a pure function of
// (manifest, seed): reruns produce byte-identical output.
struct ExperimentManifest {
  std::string command = "verify";  // verify | design | simulate | covariant | counterexample
  std::string model = "mixed_full";  // mixed_full | pure_full
  std::vector<BlochVector> theta_points{BlochVector(0.0, 0.0, 0.5)};
  std::string povm_source = "builtin";  // builtin | file
  std::string povm_file;                // POVM JSON, used when povm_source == "file"
  std::vector<std::uint64_t> copy_list{1000};
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  std::string policy = "project";            // project | discard
  std::string allocation = "deterministic";  // deterministic | multinomial
  double stage1_exponent = 0.7;
  double covariant_exponent = 0.5;
  std::string target_kind = "scaled_helstrom";  // scaled_helstrom | constant | cost
  double target_scale = 1.0 / 3.0;              // G = scale·H for scaled_helstrom
  std::vector<double> target_matrix;            // row-major G or C for constant/cost
  std::vector<std::size_t> dims{2, 3, 4};       // verify: Hilbert dimensions
  std::size_t cases_per_dim = 20;               // verify: random cases per dimension
  unsigned threads = 1;
  std::string out_path;  // empty → stdout
};

// Lossless JSON round trip; rejects unknown or ill-typed fields with a config
// error naming the offending field.
nlohmann::json manifest_to_json(const ExperimentManifest& m);
ExperimentManifest manifest_from_json(const nlohmann::json& j);

// 17-significant-digit decimal rendering (round-trips any double).
std::string fmt17(double v);

// Bound-verification suites over random states and measurements.
// CSV schema: case_id,d,N,p,trace_value,bound,pass — trace_value is the
// checked scalar for the row's suite (information trace, minimum eigenvalue,
// or partial-trace sum). The counterexample row expects a violation; its pass
// column records that the violation occurred. Returns 4 if any row fails.
int cmd_verify(const ExperimentManifest& m, std::ostream& out);

// Optimal-measurement construction at theta_points[0]; writes a JSON report
// with the design, the realized-Fisher deviation ‖I − G‖, and (for cost
// targets) the minimal attainable cost.
int cmd_design(const ExperimentManifest& m, std::ostream& out);

// Two-stage protocol Monte Carlo across the N list × theta grid; one CSV row
// per cell with the scaled MQE estimate, standard errors, and the
// information-budget trace of the realized error matrix.
int cmd_simulate(const ExperimentManifest& m, std::ostream& out);

// Covariant direction-estimation experiment: rows (N, mean_cost, stderr,
// asymptote 1 − 1/N).
int cmd_covariant(const ExperimentManifest& m, std::ostream& out);

// Single-row report for the collective two-copy measurement that beats the
// separable information bound.
int cmd_counterexample(const ExperimentManifest& m, std::ostream& out);

// Dispatch on m.command. Maps errors to the exit-code contract:
// 0 success, 2 configuration error, 3 numerical failure, 4 bound check failed
// (a violation where none was expected, or an expected violation missing).
// Diagnostics go to diag.
int run_manifest(const ExperimentManifest& m, std::ostream& out, std::ostream& diag);

}  // namespace qcrb
