#pragma once

#include <optional>
#include <string>
#include <vector>

#include "magiclab/channels.hpp"
#include "magiclab/conic.hpp"
#include "magiclab/phase_space.hpp"
#include "magiclab/types.hpp"

namespace magiclab {

/// Result of a magic measure. `log2_value` is the measure itself for the
/// logarithmic quantities (mana, max-thauma) and log2 of the robustness;
/// `exp_value` is 2^log2_value (the Wigner 1-norm, t*, or the robustness).
struct MeasureReport {
  std::string measure;
  double log2_value = 0.0;
  double exp_value = 1.0;
  std::optional<PhasePoint> argmax_point;
  std::string solver_status = "exact";
  double gap = 0.0;
  /// Optimal Y (channel thauma), V (state thauma, dual channel thauma), or sigma (robustness).
  Matrix certificate;
  /// omega for the Wigner-polytope robustness.
  Matrix certificate2;
  /// Stabilizer decomposition weights for robustness_stab.
  RealVector weights;
};

/// Throws ValidationError unless rho is Hermitian, PSD and of unit trace to `tol`.
void require_state(const Operator& rho, double tol = kValidationTol);

/// Sum of |W_rho(u)| over the negative entries.
double sum_negativity(const Operator& rho);
/// log2 ||rho||_{W,1}.
double mana_state(const Operator& rho);
/// log2 of the largest row 1-norm of a state or channel table.
double mana_of_table(const WignerTable& table);

/// log2 max_u ||N(A_u)||_{W,1}; argmax_point is the first maximising input point.
/// With `require_tp` false any CP map is accepted.
MeasureReport mana_channel(const Channel& channel, bool require_tp = true);

struct CpwpResult {
  bool cpwp = true;
  double min_entry = 0.0;
  PhasePoint input;
  PhasePoint output;
};
/// CPWP iff every table entry is >= -tol; reports the most negative entry.
CpwpResult is_cpwp(const WignerTable& table, double tol = 1e-9);
CpwpResult is_cpwp(const Channel& channel, double tol = 1e-9);

struct ThaumaOptions {
  conic::Settings solver;
  /// Channels with n_in + n_out above this are rejected unless `force` is set.
  int max_channel_qudits = 2;
  /// States with more qudits than this are rejected unless `force` is set.
  int max_state_qudits = 3;
  bool force = false;
};

/// log2 min ||V||_{W,1} subject to V >= rho.
MeasureReport max_thauma_state(const Operator& rho, const ThaumaOptions& options = {});
/// log2 min t subject to J <= Y and sum_v |W_Y(v|u)| <= t for every u.
MeasureReport max_thauma_channel(const Channel& channel, const ThaumaOptions& options = {});
/// The same program read from the solver's dual: log2 of the dual optimum, with the
/// dual slack on the Y block as certificate.
MeasureReport max_thauma_channel_dual(const Channel& channel, const ThaumaOptions& options = {});

/// min 1 + 2p subject to rho = (1 + p) sigma - p omega with sigma, omega PSD
/// and Wigner non-negative.
MeasureReport robustness_wplus(const Operator& rho, const conic::Settings& settings = {});
/// min sum |c_i| subject to rho = sum c_i S_i over pure stabilizer states; d^n <= 9.
MeasureReport robustness_stab(const Operator& rho, const conic::Settings& settings = {});

struct AmortizedResult {
  double gain = 0.0;  // max over inputs of M(output) - M(input)
  std::size_t best_input = 0;
  double channel_mana = 0.0;
};
/// Inputs live on R (x) A with the channel acting on the trailing n_in qudits.
/// Throws Error if some gain exceeds the channel mana by more than 1e-8.
AmortizedResult amortized_lower_bound(const Channel& channel, const std::vector<Operator>& inputs);

/// log2(1 + 2 sin(pi / 18)), the max-thauma of the qutrit T state.
double t_state_thauma();
/// theta_max(N) / theta_max(|T><T|).
double distillable_t_bound(const Channel& channel, const ThaumaOptions& options = {});

struct InjectableBounds {
  double mana_resource = 0.0;
  double thauma_resource = 0.0;
  double mana_channel = 0.0;
  double thauma_channel = 0.0;
  /// M(N) <= M(omega) and theta(N) <= theta(omega) within `tol`.
  bool holds = true;
};
InjectableBounds injectable_bounds(const Channel& channel, const Operator& resource, const ThaumaOptions& options = {},
                                   double tol = 1e-6);

}  // namespace magiclab
