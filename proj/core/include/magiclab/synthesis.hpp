#pragma once

#include <optional>
#include <string>

#include "magiclab/channels.hpp"
#include "magiclab/measures.hpp"

namespace magiclab {

struct SynthesisBound {
  std::string target;
  std::string resource;
  double mana_target = 0.0;
  double mana_resource = 0.0;
  double mana_ratio = 0.0;
  std::optional<double> thauma_target;
  std::optional<double> thauma_resource;
  std::optional<double> thauma_ratio;
  /// Why the thauma ratio is missing, if it is.
  std::string note;
  /// max of the available ratios; +infinity when the resource is free but the target is not.
  double bound = 0.0;
  /// Smallest admissible integer count; empty when the bound is infinite.
  std::optional<long> ceiling;
};

/// Ratio of measures with the conventions x / 0 = inf for x > 0 and 0 / 0 = 0;
/// values below `zero_tol` count as zero.
double measure_ratio(double target, double resource, double zero_tol);
/// ceil(k - 1e-6) clamped at zero, so ratios that are integral up to numerical noise are not rounded up.
std::optional<long> count_ceiling(double k);

/// max{M(N) / M(N'), theta(N) / theta(N')}. The thauma ratio is skipped (and noted)
/// when either channel exceeds the thauma size gate.
SynthesisBound exact_bound(const Channel& target, const Channel& resource, const ThaumaOptions& options = {},
                           const std::string& target_name = "target", const std::string& resource_name = "resource");

/// M(N) / M(N'); infinite when the resource is CPWP.
double noisy_bound(const Channel& target, const Channel& resource);

struct ApproxBound {
  double epsilon = 0.0;
  /// min over admissible approximations of the largest Wigner row 1-norm, 2^{M(N~)}.
  double min_row_norm = 1.0;
  double mana_approximation = 0.0;
  double mana_resource = 0.0;
  /// mana_approximation / mana_resource.
  double k = 0.0;
  std::optional<long> bound;
  /// Choi matrix of the optimal approximation.
  Matrix approximation;
  std::string solver_status = "exact";
};

/// Lower bound on the number of resource uses needed to simulate the target to
/// diamond-norm error epsilon (half diamond norm) with CPWP operations. epsilon = 0
/// is the exact mana ratio; otherwise the SDP over approximations N~ with
/// J~ >= 0, tr_B J~ = 1, Y >= 0, Y >= J_N - J~, tr_B Y <= epsilon 1 is solved.
ApproxBound approx_bound(const Channel& target, const Channel& resource, double epsilon,
                         const ThaumaOptions& options = {});

/// (1/2) ||a - b||_diamond via max <J_a - J_b, W> subject to 0 <= W <= rho (x) 1, tr rho = 1.
double diamond_distance(const Channel& a, const Channel& b, const conic::Settings& settings = {});
/// Same for a Hermitian difference of Choi matrices on (input, output).
double diamond_distance(int d, int n_in, int n_out, const Matrix& choi_difference,
                        const conic::Settings& settings = {});

}  // namespace magiclab
