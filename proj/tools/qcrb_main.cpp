#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcrb/cli.hpp"
#include "qcrb/errors.hpp"

namespace {

struct FlagSet {
  std::string manifest_path, out_path, policy, allocation, model, target_kind;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  unsigned threads = 1;
  double exponent = 0.0, scale = 0.0;
  std::size_t cases = 0;
  std::vector<std::uint64_t> copies;
  std::vector<double> theta;
};

// Shared flags for every subcommand; manifest values fill in anything the
// command line leaves unset (flags win).
void add_common(CLI::App* sub, FlagSet& f) {
  sub->add_option("--manifest", f.manifest_path, "JSON manifest; flags override its fields");
  sub->add_option("--seed", f.seed, "master seed for all random streams");
  sub->add_option("--out", f.out_path, "output file (default: stdout)");
  sub->add_option("--threads", f.threads, "worker threads for Monte Carlo fan-out")
      ->envname("QCRB_THREADS");
  sub->add_option("--policy", f.policy, "out-of-ball handling")
      ->check(CLI::IsMember({"project", "discard"}));
  sub->add_option("--allocation", f.allocation, "stage-2 copy allocation")
      ->check(CLI::IsMember({"deterministic", "multinomial"}));
  sub->add_option("--model", f.model, "state family")
      ->check(CLI::IsMember({"mixed_full", "pure_full"}));
  sub->add_option("--trials", f.trials, "Monte Carlo trials per cell");
  sub->add_option("--copies", f.copies, "copy budgets N (repeatable)");
  sub->add_option("--theta", f.theta, "Bloch vector of the true/reference state")
      ->expected(3);
  sub->add_option("--exponent", f.exponent, "stage-1 copy exponent a in (0,1)");
  sub->add_option("--scale", f.scale, "target scale for scaled_helstrom targets");
  sub->add_option("--target-kind", f.target_kind, "target interpretation")
      ->check(CLI::IsMember({"scaled_helstrom", "constant", "cost"}));
  sub->add_option("--cases", f.cases, "random cases per dimension (verify)");
}

int fail(const std::string& msg) {
  std::cerr << "error: " << msg << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Numerical laboratory for quantum state estimation: information-bound "
      "verification, optimal measurement design, and two-stage protocol simulation"};
  app.require_subcommand(1);

  FlagSet f;
  CLI::App* verify = app.add_subcommand("verify", "run the bound-verification suites (CSV)");
  CLI::App* design = app.add_subcommand("design", "construct an optimal measurement (JSON)");
  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo the two-stage protocol (CSV)");
  CLI::App* covariant =
      app.add_subcommand("covariant", "covariant direction-estimation cost table (CSV)");
  CLI::App* counterexample =
      app.add_subcommand("counterexample", "collective-measurement bound violation (CSV)");
  for (CLI::App* sub : {verify, design, simulate, covariant, counterexample})
    add_common(sub, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  CLI::App* chosen = app.get_subcommands().front();

  qcrb::ExperimentManifest manifest;
  if (!f.manifest_path.empty()) {
    std::ifstream in(f.manifest_path);
    if (!in) return fail("cannot open manifest '" + f.manifest_path + "'");
    try {
      nlohmann::json j;
      in >> j;
      manifest = qcrb::manifest_from_json(j);
    } catch (const qcrb::Error& e) {
      return fail(e.what());
    } catch (const std::exception& e) {
      return fail(std::string("manifest parse: ") + e.what());
    }
  }

  manifest.command = chosen->get_name();
  if (chosen->count("--seed")) manifest.seed = f.seed;
  if (chosen->count("--out")) manifest.out_path = f.out_path;
  if (chosen->count("--threads")) manifest.threads = f.threads;
  if (chosen->count("--policy")) manifest.policy = f.policy;
  if (chosen->count("--allocation")) manifest.allocation = f.allocation;
  if (chosen->count("--model")) manifest.model = f.model;
  if (chosen->count("--trials")) manifest.trials = f.trials;
  if (chosen->count("--copies")) manifest.copy_list = f.copies;
  if (chosen->count("--theta"))
    manifest.theta_points = {qcrb::BlochVector(f.theta[0], f.theta[1], f.theta[2])};
  if (chosen->count("--exponent")) {
    manifest.stage1_exponent = f.exponent;
    manifest.covariant_exponent = f.exponent;
  }
  if (chosen->count("--scale")) manifest.target_scale = f.scale;
  if (chosen->count("--target-kind")) manifest.target_kind = f.target_kind;
  if (chosen->count("--cases")) manifest.cases_per_dim = f.cases;

  if (!manifest.out_path.empty()) {
    std::ofstream out(manifest.out_path);
    if (!out) return fail("cannot open output file '" + manifest.out_path + "'");
    return qcrb::run_manifest(manifest, out, std::cerr);
  }
  return qcrb::run_manifest(manifest, std::cout, std::cerr);
}
