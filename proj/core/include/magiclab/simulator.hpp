#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "magiclab/channels.hpp"
#include "magiclab/phase_space.hpp"

namespace magiclab {

struct Gate {
  Channel channel;
  std::vector<int> targets;
  std::string label;
};

/// Product-state preparation, a sequence of k -> k channels on qudit subsets,
/// and a single effect on a subset of qudits.
struct Circuit {
  int d = 3;
  int n = 1;
  /// One single-qudit state per qudit; empty means |0> everywhere.
  std::vector<Operator> initial;
  std::vector<Gate> gates;
  /// Effect on `measured`; defaults to |0><0| on qudit 0 when `measured` is empty.
  std::vector<int> measured;
  std::optional<Operator> effect;

  /// Checks dimensions, targets and gate arity (<= max_arity qudits per gate).
  void validate(int max_arity = 3) const;
  Circuit& add(Channel channel, std::vector<int> targets, std::string label = {});

  /// Preparation of qudit q, with the |0> default applied.
  Operator initial_state(int q) const;
  std::vector<int> measured_qudits() const;
  Operator effect_operator() const;
};

struct NegativityProfile {
  /// Row 1-norms of every gate table (indexed by the local input point).
  std::vector<RealVector> row_norms;
  std::vector<double> gate_negativity;  // max row norm per gate
  double forward = 1.0;                 // product of gate_negativity
  double state = 1.0;                   // ||rho||_{W,1} of the product input
  double effect = 1.0;                  // max_u |W(E|u)|
  /// Bound on the magnitude of every sample: state * forward * effect.
  double bound = 1.0;
};

NegativityProfile negativity_profile(const Circuit& circuit);

/// ceil((2 / eps^2) * bound^2 * ln(2 / delta)).
std::uint64_t sample_count(double epsilon, double delta, double bound);

struct SamplerOptions {
  /// Independent RNG streams; the result depends on (seed, shards), not on threads.
  int shards = 16;
  /// Worker threads; 0 uses the hardware concurrency.
  int threads = 0;
  /// Overrides the Hoeffding count when non-zero.
  std::uint64_t samples = 0;
};

struct EstimateResult {
  double estimate = 0.0;
  std::uint64_t samples = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double variance = 0.0;  // empirical variance of a single sample
  std::uint64_t seed = 0;
  int shards = 0;
  double bound = 1.0;
  double max_abs_sample = 0.0;
};

/// Monte Carlo estimate of tr[E N_L(... N_1(rho))] by sampling phase-space
/// trajectories from the normalised absolute Wigner tables.
EstimateResult estimate(const Circuit& circuit, double epsilon, double delta, std::uint64_t seed,
                        const SamplerOptions& options = {});

enum class ExactBackend { DensityMatrix, Wigner };
/// Born probability by density-matrix evolution or by contracting Wigner tables.
/// Both are limited to n <= max_qudits.
double exact_born(const Circuit& circuit, ExactBackend backend = ExactBackend::DensityMatrix, int max_qudits = 6);

}  // namespace magiclab
