#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace magiclab {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Absolute tolerance used when validating Hermiticity, positivity and
/// trace preservation of user-supplied data.
inline constexpr double kValidationTol = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension is not an odd prime, or shapes do not line up.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input violates a mathematical precondition (Hermiticity, PSD, probabilities).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Problem exceeds a configured size gate.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

bool is_odd_prime(int d) noexcept;
void require_odd_prime(int d);

/// Integer power for small dimensions; throws DimensionError on overflow.
std::size_t ipow(std::size_t base, int exponent);

/// A point of the discrete phase space (Z_d x Z_d)^n, one (a1, a2) pair per qudit.
struct PhasePoint {
  std::vector<std::array<int, 2>> components;

  int qudits() const noexcept { return static_cast<int>(components.size()); }
  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

/// Row-major over qudits, then (a1, a2) lexicographic.
std::size_t point_index(int d, const PhasePoint& point);
PhasePoint point_at(int d, int n, std::size_t index);
std::string to_string(const PhasePoint& point);

/// Complex square matrix on (C^d)^{(x) n}.
class Operator {
 public:
  Operator(int d, int n, Matrix entries);

  static Operator identity(int d, int n);
  static Operator zero(int d, int n);

  int d() const noexcept { return d_; }
  int n() const noexcept { return n_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const Matrix& matrix() const noexcept { return entries_; }

  bool is_hermitian(double tol = kValidationTol) const;
  /// Throws ValidationError unless Hermitian to `tol`.
  void require_hermitian(double tol = kValidationTol) const;
  double trace_real() const { return entries_.trace().real(); }

 private:
  int d_;
  int n_;
  Matrix entries_;
};

Operator kron(const Operator& a, const Operator& b);
Matrix kron(const Matrix& a, const Matrix& b);

/// Real quasi-probability table. For states and operators n_in == 0 and the
/// table has one row; for channels row u (input point) holds W(v|u).
class WignerTable {
 public:
  WignerTable(int d, int n_in, int n_out, RealMatrix values);

  int d() const noexcept { return d_; }
  int n_in() const noexcept { return n_in_; }
  int n_out() const noexcept { return n_out_; }
  const RealMatrix& values() const noexcept { return values_; }
  Eigen::Index rows() const noexcept { return values_.rows(); }
  Eigen::Index cols() const noexcept { return values_.cols(); }

  double operator()(Eigen::Index u, Eigen::Index v) const { return values_(u, v); }
  /// Entry of a state table.
  double operator[](Eigen::Index v) const { return values_(0, v); }

  /// l1 norm of every row.
  RealVector row_norms() const;
  double total() const { return values_.sum(); }

 private:
  int d_;
  int n_in_;
  int n_out_;
  RealMatrix values_;
};

}  // namespace magiclab
