#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include "qcrb/errors.hpp"

namespace qcrb {

// Deterministic random stream. All sampling is implemented on top of raw
// mt19937_64 output (no std::*_distribution), so sequences are reproducible
// bit for bit for a given seed, independent of the standard library build.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  // Independent per-trial stream: the (master seed, trial index) pair is mixed
  // through SplitMix64 so neighbouring trial indices give uncorrelated seeds.
  static RngStream for_trial(std::uint64_t master_seed, std::uint64_t trial_index) {
    std::uint64_t x = master_seed + 0x9e3779b97f4a7c15ULL * (trial_index + 1);
    return RngStream(mix64(x));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; the spare value is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Index sampled from a (sub)probability vector by inverse CDF walk; the
  // tail outcome absorbs any leftover mass from rounding.
  std::size_t categorical(std::span<const double> probs) {
    if (probs.empty()) raise(errc::domain, "categorical: empty probability vector");
    double u = uniform();
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
      acc += probs[k];
      if (u < acc) return k;
    }
    return probs.size() - 1;
  }

 private:
  static std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
  }

  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qcrb
