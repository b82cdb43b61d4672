#include "magiclab/random.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "magiclab/stabilizer.hpp"

namespace magiclab {

namespace {

Eigen::Index dim_of(int d, int n) { return static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), n)); }

std::size_t uniform_index(std::size_t size, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
}

const std::vector<Matrix>& cached_stabilizers(int d, int n) {
  // only small registers are used; build on demand per call site
  static thread_local std::vector<std::pair<std::pair<int, int>, std::vector<Matrix>>> cache;
  for (const auto& [key, states] : cache) {
    if (key.first == d && key.second == n) return states;
  }
  cache.emplace_back(std::pair{d, n}, stabilizer_states(d, n));
  return cache.back().second;
}

}  // namespace

Matrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = Complex(normal(rng), normal(rng));
  }
  return g;
}

Matrix random_hermitian(Eigen::Index dim, Rng& rng) {
  const Matrix g = random_ginibre(dim, dim, rng);
  return (g + g.adjoint()) / 2.0;
}

Matrix random_unitary(Eigen::Index dim, Rng& rng) {
  const Matrix g = random_ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Complex diag = r(k, k);
    if (std::abs(diag) > 0) q.col(k) *= diag / std::abs(diag);
  }
  return q;
}

Operator random_state(int d, int n, Rng& rng, int rank) {
  const auto dim = dim_of(d, n);
  const Eigen::Index r = rank > 0 ? std::min<Eigen::Index>(rank, dim) : dim;
  const Matrix g = random_ginibre(dim, r, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return Operator(d, n, std::move(rho));
}

Operator random_pure_state(int d, int n, Rng& rng) { return random_state(d, n, rng, 1); }

Operator random_wplus_state(int d, int n, Rng& rng) {
  const auto& stabs = cached_stabilizers(d, n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t terms = 1 + uniform_index(4, rng);
  Matrix rho = Matrix::Zero(stabs.front().rows(), stabs.front().cols());
  double total = 0.0;
  for (std::size_t k = 0; k < terms; ++k) {
    const double w = unit(rng) + 1e-3;
    rho += w * stabs[uniform_index(stabs.size(), rng)];
    total += w;
  }
  return Operator(d, n, rho / total);
}

Matrix random_clifford(int d, int n, Rng& rng, int length) {
  const auto gens = clifford_generators(d, n);
  Matrix c = Matrix::Identity(dim_of(d, n), dim_of(d, n));
  for (int k = 0; k < length; ++k) c = gens[uniform_index(gens.size(), rng)] * c;
  return c;
}

Channel random_channel(int d, int n_in, int n_out, Rng& rng, int rank) {
  const auto di = dim_of(d, n_in);
  const auto dout = dim_of(d, n_out);
  // sum K^dagger K must be invertible, which needs rank * dout >= di
  const int min_rank = static_cast<int>((di + dout - 1) / dout);
  const int r = std::max(min_rank, rank > 0 ? rank : 1 + static_cast<int>(uniform_index(3, rng)));
  std::vector<Matrix> kraus;
  Matrix s = Matrix::Zero(di, di);
  for (int k = 0; k < r; ++k) {
    kraus.push_back(random_ginibre(dout, di, rng));
    s += kraus.back().adjoint() * kraus.back();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s);
  const Matrix inv_sqrt =
      eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * eig.eigenvectors().adjoint();
  for (auto& k : kraus) k = k * inv_sqrt;
  return Channel::from_kraus(d, n_in, n_out, std::move(kraus));
}

Channel random_cpwp_channel(int d, int n, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t terms = 1 + uniform_index(3, rng);
  std::vector<double> weights;
  double total = 0.0;
  for (std::size_t k = 0; k < terms; ++k) {
    weights.push_back(unit(rng) + 1e-3);
    total += weights.back();
  }
  std::vector<Matrix> kraus;
  for (std::size_t k = 0; k < terms; ++k) kraus.push_back(std::sqrt(weights[k] / total) * random_clifford(d, n, rng));
  Channel mix = Channel::from_kraus(d, n, n, std::move(kraus));

  switch (uniform_index(3, rng)) {
    case 0:
      return mix;
    case 1: {
      Channel noise = depolarizing(d, unit(rng));
      for (int q = 1; q < n; ++q) noise = tensor(noise, depolarizing(d, unit(rng)));
      return compose(noise, mix);
    }
    default: {
      // convex mixture with a replacer onto a Wigner-positive state
      const double lambda = unit(rng);
      const Channel rep = replacer(random_wplus_state(d, n, rng), n);
      Matrix choi = lambda * mix.choi() + (1.0 - lambda) * rep.choi();
      return Channel::from_choi(d, n, n, std::move(choi));
    }
  }
}

}  // namespace magiclab
