#pragma once

// Index bookkeeping for operators and tables laid out as tensors with one
// mode per qudit (big-endian: qudit 0 is the most significant digit).

#include <span>
#include <vector>

#include "magiclab/types.hpp"

namespace magiclab::detail {

/// Flat offsets splitting a radix-`radix` register of n digits into the
/// `targets` digits (offset, in target order) and the remaining digits (base).
/// Every flat index is uniquely base[r] + offset[t].
struct LocalIndex {
  std::vector<std::size_t> base;
  std::vector<std::size_t> offset;
};

LocalIndex local_index(std::size_t radix, int n, std::span<const int> targets);

/// Checks that targets are distinct and lie in [0, n).
void require_targets(int n, std::span<const int> targets);

/// Rearranges X_{ij} on m qudits into a vector indexed by the per-qudit pairs
/// (i_k * d + j_k), mode 0 most significant.
std::vector<Complex> to_pair_tensor(const Matrix& x, int d, int modes);
Matrix from_pair_tensor(const std::vector<Complex>& data, int d, int modes);

/// Multiplies `op` (dim x dim) into mode `mode` of a tensor with `modes`
/// modes of equal size `dim`.
void apply_mode(std::vector<Complex>& data, int modes, int mode, std::size_t dim, const Matrix& op);

/// Reorders tensor factors: output qudit k is input qudit order[k].
Matrix permute_qudits(const Matrix& x, int d, std::span<const int> order);

/// K acting on `targets` of an n-qudit register, multiplied from the left.
Matrix apply_left_local(const Matrix& k, const Matrix& m, int d, int n, std::span<const int> targets);

}  // namespace magiclab::detail
