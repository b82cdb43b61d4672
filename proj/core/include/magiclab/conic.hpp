#pragma once

#include <string>
#include <vector>

#include "magiclab/types.hpp"

namespace magiclab::conic {

/// Standard-form conic program
///
///   minimize   <c, x>   subject to  A(x) = b,  x in K
///
/// where x = (x_lp, X_1, ..., X_k), K is the nonnegative orthant times Hermitian
/// PSD cones, and <C, X> = Re tr[C X]. The dual is
///
///   maximize   b^T y    subject to  c - A^T(y) = s,  s in K.
///
/// Absolute values are modelled by the caller with split variables.
class Problem {
 public:
  /// Appends `count` nonnegative scalar variables; returns the index of the first.
  int add_nonneg(int count);
  /// Appends a size x size Hermitian PSD variable; returns its block index.
  int add_psd(int size);
  /// Appends an equality row with right-hand side `rhs`; returns the row index.
  int add_row(double rhs);

  void set_nonneg_coeff(int row, int var, double value);
  /// Coefficient matrix of block `block` in `row`; must be Hermitian. Repeated calls accumulate.
  void add_psd_coeff(int row, int block, const Matrix& coeff);
  void set_nonneg_cost(int var, double value);
  void set_psd_cost(int block, const Matrix& cost);
  void set_rhs(int row, double rhs);

  int rows() const noexcept { return static_cast<int>(rhs_.size()); }
  int nonneg_count() const noexcept { return n_lp_; }
  const std::vector<int>& block_sizes() const noexcept { return block_sizes_; }

  struct LpEntry {
    int row;
    int var;
    double value;
  };
  struct PsdEntry {
    int row;
    int block;
    Matrix coeff;
  };
  const std::vector<LpEntry>& lp_entries() const noexcept { return lp_entries_; }
  const std::vector<PsdEntry>& psd_entries() const noexcept { return psd_entries_; }
  const std::vector<double>& rhs() const noexcept { return rhs_; }
  const std::vector<double>& lp_cost() const noexcept { return lp_cost_; }
  const std::vector<Matrix>& psd_cost() const noexcept { return psd_cost_; }

 private:
  int n_lp_ = 0;
  std::vector<int> block_sizes_;
  std::vector<double> rhs_;
  std::vector<double> lp_cost_;
  std::vector<Matrix> psd_cost_;
  std::vector<LpEntry> lp_entries_;
  std::vector<PsdEntry> psd_entries_;
};

enum class Status { Optimal, Infeasible, Unbounded, Inaccurate };
std::string to_string(Status status);

struct Settings {
  double tol = 1e-7;
  int max_iterations = 150;
  int max_block = 200;
  int max_rows = 50000;
  /// Replace every Hermitian block by its real symmetric embedding before solving.
  bool real_embedding = false;
  /// When non-empty the standard form is written to this path as JSON.
  std::string dump_path;
};

struct Solution {
  Status status = Status::Inaccurate;
  double primal_value = 0.0;
  double dual_value = 0.0;
  RealVector x;               // nonnegative part
  std::vector<Matrix> X;      // PSD blocks
  RealVector y;               // equality multipliers
  RealVector s;               // dual slack, nonnegative part
  std::vector<Matrix> S;      // dual slack, PSD blocks
  double primal_residual = 0.0;  // ||b - A(x)|| / (1 + ||b||)
  double dual_residual = 0.0;    // ||c - A^T(y) - s|| / (1 + ||c||)
  double gap = 0.0;              // |primal - dual|
  double relative_gap = 0.0;     // gap / (1 + |primal| + |dual|)
  double complementarity = 0.0;  // <x, s>
  int iterations = 0;

  bool optimal() const noexcept { return status == Status::Optimal; }
};

/// Primal-dual interior point method (HKM direction, Mehrotra predictor-corrector).
/// Throws SizeLimitError when the problem exceeds the configured limits.
Solution solve(const Problem& problem, const Settings& settings = {});

/// phi(H) = [[Re H, -Im H], [Im H, Re H]]; <phi(A), phi(B)> = 2 Re tr[A B], and
/// H is PSD iff phi(H) is.
RealMatrix hermitian_embedding(const Matrix& h);
/// Left inverse on the image of phi; for a general real symmetric Y returns
/// (Y11 + Y22)/2 + i (Y21 - Y12)/2, which is PSD whenever Y is.
Matrix hermitian_from_embedding(const RealMatrix& y);

/// Orthogonal basis E_k of the real space of dim x dim Hermitian matrices:
/// diagonal units, then (e_ij + e_ji) and i(e_ij - e_ji) for i < j. Matching
/// <E_k, X> for all k imposes a Hermitian matrix equality.
std::vector<Matrix> hermitian_basis(Eigen::Index dim);

/// Problem with every Hermitian block replaced by its doubled real embedding.
Problem real_embedding(const Problem& problem);

/// Writes the standard form as JSON (see README for the layout).
void dump_json(const Problem& problem, const std::string& path);

}  // namespace magiclab::conic
