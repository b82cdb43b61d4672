#pragma once

#include <memory>
#include <span>
#include <vector>

#include "magiclab/types.hpp"

namespace magiclab {

class Channel;

/// Shift X|j> = |j+1> and clock Z|j> = w^j |j> for a single qudit.
Matrix shift_matrix(int d);
Matrix clock_matrix(int d);

/// Heisenberg-Weyl operator T_u = tau^{-a1 a2} Z^{a1} X^{a2}, tau = e^{(d+1) pi i / d};
/// multi-qudit points give the tensor product of the single-qudit operators.
Operator weyl_operator(int d, const PhasePoint& point);

/// Phase-space point operator A_u = T_u A_0 T_u^dagger with A_0 = (1/d) sum_u T_u.
Operator phase_point_operator(int d, const PhasePoint& point);

/// Single-qudit phase-space data for one dimension, built once and shared.
///
/// `forward()` is the d^2 x d^2 matrix taking the pair-vectorised entries
/// X_{ij} (index i*d + j) of a single-qudit operator to tr[A_u X]; the
/// factorised transforms apply it along every tensor factor in turn.
class PhaseSpace {
 public:
  static const PhaseSpace& of(int d);

  int d() const noexcept { return d_; }
  int points() const noexcept { return d_ * d_; }
  const Matrix& point_operator(int index) const { return point_ops_.at(static_cast<std::size_t>(index)); }
  const Matrix& weyl(int index) const { return weyl_ops_.at(static_cast<std::size_t>(index)); }

  /// Row u, column i*d+j: (A_u)_{ji}, so that row . vec(X) = tr[A_u X].
  const Matrix& forward() const noexcept { return forward_; }
  /// Same with A_u replaced by its transpose.
  const Matrix& forward_transposed() const noexcept { return forward_transposed_; }
  /// Row i*d+j, column u: (A_u)_{ij}, so that X = sum_u w_u A_u.
  const Matrix& inverse() const noexcept { return inverse_; }

 private:
  explicit PhaseSpace(int d);

  int d_;
  std::vector<Matrix> weyl_ops_;
  std::vector<Matrix> point_ops_;
  Matrix forward_;
  Matrix forward_transposed_;
  Matrix inverse_;
};

/// Raw factorised transform: entry u of the result is tr[(B_{u_1} (x) ... (x) B_{u_m}) X]
/// where B = A, or A^T on modes flagged in `transposed`. X acts on m = transposed.size() qudits.
RealVector phase_space_coefficients(int d, const Matrix& x, const std::vector<bool>& transposed);

/// W_X(u) = tr[A_u X] / d^n.
WignerTable wigner_of_state(const Operator& x, double tol = kValidationTol);

/// W(E|u) = tr[E A_u]; validates 0 <= E <= 1.
WignerTable wigner_of_measurement(const Operator& effect, double tol = kValidationTol);

/// W(v|u) = tr[((A^u)^T (x) A^v) J] / d^{n_out}, row u, column v.
WignerTable wigner_of_channel(const Channel& channel);
WignerTable wigner_of_choi(int d, int n_in, int n_out, const Matrix& choi);

/// Inverse of wigner_of_state: X = sum_u W(u) A_u.
Operator reconstruct(const WignerTable& table);

/// Output table sum_u W_N(v|u) W(u, y), contracting only over the target qudits.
/// The channel must map k qudits to k qudits, k = targets.size().
WignerTable propagate(const WignerTable& state, const WignerTable& channel,
                      std::span<const int> targets);

/// Table of second o first: W(w|u) = sum_v W_second(w|v) W_first(v|u).
WignerTable compose_tables(const WignerTable& second, const WignerTable& first);
/// Table of a (x) b.
WignerTable tensor_tables(const WignerTable& a, const WignerTable& b);

/// ||V||_{W,1} = sum_u |W_V(u)|.
double wigner_trace_norm(const Operator& v);
/// ||V||_{W,inf} = max_u |tr[A_u V]|.
double wigner_spectral_norm(const Operator& v);

}  // namespace magiclab
