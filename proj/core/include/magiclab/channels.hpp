#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "magiclab/types.hpp"

namespace magiclab {

/// Completely positive map stored by its unnormalised Choi matrix
/// J = sum_ij |i><j| (x) N(|i><j|), input factor first.
///
/// Unitary and Kraus constructions keep their generating operators so that
/// composition and local application can skip the eigendecomposition.
class Channel {
 public:
  enum class Kind { Unitary, Kraus, ChoiOnly };

  /// Validates Hermiticity and positivity of `choi` to `tol`.
  static Channel from_choi(int d, int n_in, int n_out, Matrix choi, double tol = kValidationTol);
  static Channel from_unitary(const Operator& u, double tol = kValidationTol);
  static Channel from_kraus(int d, int n_in, int n_out, std::vector<Matrix> kraus);

  int d() const noexcept { return d_; }
  int n_in() const noexcept { return n_in_; }
  int n_out() const noexcept { return n_out_; }
  Eigen::Index dim_in() const noexcept { return dim_in_; }
  Eigen::Index dim_out() const noexcept { return dim_out_; }
  Kind kind() const noexcept { return kind_; }
  const Matrix& choi() const noexcept { return choi_; }

  /// Stored Kraus operators, or ones recovered from the Choi eigendecomposition
  /// (eigenvalues below 1e-12 dropped).
  std::vector<Matrix> kraus_operators() const;
  /// The unitary for Kind::Unitary channels.
  const Matrix* unitary() const noexcept { return kind_ == Kind::Unitary ? &kraus_.front() : nullptr; }

  bool is_trace_preserving(double tol = kValidationTol) const;

 private:
  friend Channel tensor(const Channel& a, const Channel& b);
  Channel(int d, int n_in, int n_out, Kind kind, Matrix choi, std::vector<Matrix> kraus);

  int d_;
  int n_in_;
  int n_out_;
  Eigen::Index dim_in_;
  Eigen::Index dim_out_;
  Kind kind_;
  Matrix choi_;
  std::vector<Matrix> kraus_;
};

/// Choi matrix of an arbitrary linear map given by its action on |i><j|.
Matrix choi_from_map(int d, int n_in, int n_out, const std::function<Matrix(const Matrix&)>& map);

/// N(rho) = tr_A[(rho^T (x) 1) J].
Operator apply(const Channel& channel, const Operator& rho);
/// sum_k K rho K^dagger; requires Kraus data (computed from the Choi matrix otherwise).
Operator apply_kraus(const Channel& channel, const Operator& rho);
/// Applies a k -> k channel to `targets` of an n-qudit operator.
Operator apply_local(const Channel& channel, const Operator& rho, std::span<const int> targets);

/// second o first.
Channel compose(const Channel& second, const Channel& first);
/// a (x) b with input order (A1 A2) and output order (B1 B2).
Channel tensor(const Channel& a, const Channel& b);
Channel tensor_power(const Channel& a, int copies);

Channel identity_channel(int d, int n = 1);
Channel unitary_channel(int d, int n, const Matrix& u);

/// Qutrit T gate diag(xi, 1, xi^{-1}), xi = e^{2 pi i / 9}.
Matrix t_gate_matrix();
Channel t_gate();
Channel t_dagger();
/// diag(e^{i theta/9}, 1, e^{-i theta/9}); theta = 2 pi is the T gate.
Channel u_theta(double theta);
/// Qutrit |a,b,c> -> |a,b,c + a b mod 3>.
Matrix ccx_matrix();
Channel ccx();

/// Clifford generators for one qudit and the two-qudit sum gate |a,b> -> |a,a+b>.
Matrix fourier_matrix(int d);
Matrix phase_gate_matrix(int d);
Matrix csum_matrix(int d);

/// (1-p) rho + p/(d^2-1) sum_{(i,j) != (0,0)} X^i Z^j rho (X^i Z^j)^dagger.
Channel depolarizing(int d, double p);
/// sum_k p_k Z^k rho Z^{-k}; the local dimension is probs.size().
Channel dephasing(std::span<const double> probs);
/// Qutrit map V -> ((tr V) 1 - V^T) / 2.
Channel werner_holevo();
/// rho -> tr[rho] sigma on n_in input qudits.
Channel replacer(const Operator& sigma, int n_in = 1);

/// Named states: computational digits "0".."d-1", "+", "T" (d = 3), "mixed"
/// (maximally mixed qudit) and "Phi" (two-qudit maximally entangled state).
Operator state_library(const std::string& name, int d = 3);
std::vector<std::string> state_names();

}  // namespace magiclab
