#include "tensor.hpp"

#include <algorithm>

namespace magiclab::detail {

void require_targets(int n, std::span<const int> targets) {
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int t : targets) {
    if (t < 0 || t >= n) throw DimensionError("target qudit " + std::to_string(t) + " out of range");
    if (seen[static_cast<std::size_t>(t)]) throw DimensionError("repeated target qudit");
    seen[static_cast<std::size_t>(t)] = true;
  }
}

LocalIndex local_index(std::size_t radix, int n, std::span<const int> targets) {
  require_targets(n, targets);
  std::vector<std::size_t> weight(static_cast<std::size_t>(n));
  std::size_t w = 1;
  for (int k = n - 1; k >= 0; --k) {
    weight[static_cast<std::size_t>(k)] = w;
    w *= radix;
  }
  std::vector<bool> is_target(static_cast<std::size_t>(n), false);
  for (int t : targets) is_target[static_cast<std::size_t>(t)] = true;

  LocalIndex idx;
  const auto k = static_cast<int>(targets.size());
  const std::size_t n_local = ipow(radix, k);
  idx.offset.resize(n_local);
  for (std::size_t t = 0; t < n_local; ++t) {
    std::size_t rem = t;
    std::size_t off = 0;
    for (int j = k - 1; j >= 0; --j) {
      off += (rem % radix) * weight[static_cast<std::size_t>(targets[static_cast<std::size_t>(j)])];
      rem /= radix;
    }
    idx.offset[t] = off;
  }

  std::vector<std::size_t> rest_weights;
  for (int q = 0; q < n; ++q) {
    if (!is_target[static_cast<std::size_t>(q)]) rest_weights.push_back(weight[static_cast<std::size_t>(q)]);
  }
  const std::size_t n_rest = ipow(radix, static_cast<int>(rest_weights.size()));
  idx.base.resize(n_rest);
  for (std::size_t r = 0; r < n_rest; ++r) {
    std::size_t rem = r;
    std::size_t off = 0;
    for (auto it = rest_weights.rbegin(); it != rest_weights.rend(); ++it) {
      off += (rem % radix) * *it;
      rem /= radix;
    }
    idx.base[r] = off;
  }
  return idx;
}

namespace {

// spread[i] places the base-d digits of i into the pair-tensor index at
// stride `scale` per pair digit.
std::vector<std::size_t> spread_digits(int d, int modes, std::size_t scale) {
  const std::size_t dim = ipow(static_cast<std::size_t>(d), modes);
  const auto dd = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
  std::vector<std::size_t> out(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t rem = i;
    std::size_t pos = 0;
    std::size_t w = scale;
    for (int k = modes - 1; k >= 0; --k) {
      pos += (rem % static_cast<std::size_t>(d)) * w;
      rem /= static_cast<std::size_t>(d);
      w *= dd;
    }
    out[i] = pos;
  }
  return out;
}

}  // namespace

std::vector<Complex> to_pair_tensor(const Matrix& x, int d, int modes) {
  const auto rows = spread_digits(d, modes, static_cast<std::size_t>(d));
  const auto cols = spread_digits(d, modes, 1);
  std::vector<Complex> out(rows.size() * rows.size());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      out[rows[static_cast<std::size_t>(i)] + cols[static_cast<std::size_t>(j)]] = x(i, j);
    }
  }
  return out;
}

Matrix from_pair_tensor(const std::vector<Complex>& data, int d, int modes) {
  const auto rows = spread_digits(d, modes, static_cast<std::size_t>(d));
  const auto cols = spread_digits(d, modes, 1);
  const auto dim = static_cast<Eigen::Index>(rows.size());
  Matrix x(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      x(i, j) = data[rows[static_cast<std::size_t>(i)] + cols[static_cast<std::size_t>(j)]];
    }
  }
  return x;
}

void apply_mode(std::vector<Complex>& data, int modes, int mode, std::size_t dim, const Matrix& op) {
  const std::size_t inner = ipow(dim, modes - 1 - mode);
  const std::size_t outer = ipow(dim, mode);
  const auto in = static_cast<Eigen::Index>(inner);
  const auto dm = static_cast<Eigen::Index>(dim);
  const Matrix op_t = op.transpose();
  Matrix scratch(in, dm);
  for (std::size_t a = 0; a < outer; ++a) {
    Eigen::Map<Matrix> slice(data.data() + a * dim * inner, in, dm);
    scratch.noalias() = slice * op_t;
    slice = scratch;
  }
}

Matrix permute_qudits(const Matrix& x, int d, std::span<const int> order) {
  const auto n = static_cast<int>(order.size());
  const std::size_t dim = ipow(static_cast<std::size_t>(d), n);
  if (static_cast<std::size_t>(x.rows()) != dim) throw DimensionError("permutation size mismatch");
  // weight of input qudit order[k] in the output index
  std::vector<std::size_t> in_weight(static_cast<std::size_t>(n));
  {
    std::size_t w = 1;
    for (int k = n - 1; k >= 0; --k) {
      in_weight[static_cast<std::size_t>(k)] = w;
      w *= static_cast<std::size_t>(d);
    }
  }
  std::vector<std::size_t> map(dim);
  for (std::size_t out = 0; out < dim; ++out) {
    std::size_t rem = out;
    std::size_t src = 0;
    for (int k = n - 1; k >= 0; --k) {
      src += (rem % static_cast<std::size_t>(d)) * in_weight[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
      rem /= static_cast<std::size_t>(d);
    }
    map[out] = src;
  }
  Matrix y(x.rows(), x.cols());
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < dim; ++i) {
      y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          x(static_cast<Eigen::Index>(map[i]), static_cast<Eigen::Index>(map[j]));
    }
  }
  return y;
}

Matrix apply_left_local(const Matrix& k, const Matrix& m, int d, int n, std::span<const int> targets) {
  const auto idx = local_index(static_cast<std::size_t>(d), n, targets);
  const auto local = static_cast<Eigen::Index>(idx.offset.size());
  if (k.rows() != local || k.cols() != local) throw DimensionError("local operator size mismatch");
  Matrix out(m.rows(), m.cols());
  Matrix gathered(local, m.cols());
  for (std::size_t base : idx.base) {
    for (Eigen::Index t = 0; t < local; ++t) {
      gathered.row(t) = m.row(static_cast<Eigen::Index>(base + idx.offset[static_cast<std::size_t>(t)]));
    }
    const Matrix res = k * gathered;
    for (Eigen::Index t = 0; t < local; ++t) {
      out.row(static_cast<Eigen::Index>(base + idx.offset[static_cast<std::size_t>(t)])) = res.row(t);
    }
  }
  return out;
}

}  // namespace magiclab::detail
