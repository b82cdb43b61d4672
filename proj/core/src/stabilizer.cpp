#include "magiclab/stabilizer.hpp"

#include <cmath>
#include <deque>
#include <set>

#include "magiclab/channels.hpp"

namespace magiclab {

namespace {

Matrix embed(const Matrix& local, int d, int n, int first) {
  // local acts on qudits [first, first + k)
  const auto k = static_cast<int>(std::lround(std::log(static_cast<double>(local.rows())) / std::log(static_cast<double>(d))));
  const auto before = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), first));
  const auto after = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), n - first - k));
  return kron(kron(Matrix(Matrix::Identity(before, before)), local), Matrix(Matrix::Identity(after, after)));
}

std::vector<long long> canonical_key(Vector& psi) {
  Eigen::Index lead = 0;
  while (lead < psi.size() && std::abs(psi(lead)) < 1e-9) ++lead;
  const Complex phase = std::abs(psi(lead)) / psi(lead);
  psi *= phase;
  std::vector<long long> key;
  key.reserve(static_cast<std::size_t>(2 * psi.size()));
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    key.push_back(std::llround(psi(i).real() * 1e7));
    key.push_back(std::llround(psi(i).imag() * 1e7));
  }
  return key;
}

}  // namespace

std::vector<Matrix> clifford_generators(int d, int n) {
  require_odd_prime(d);
  if (n < 1) throw DimensionError("need at least one qudit");
  std::vector<Matrix> gens;
  const Matrix f = fourier_matrix(d);
  const Matrix s = phase_gate_matrix(d);
  for (int q = 0; q < n; ++q) {
    gens.push_back(embed(f, d, n, q));
    gens.push_back(embed(s, d, n, q));
  }
  if (n > 1) {
    const Matrix sum = csum_matrix(d);
    for (int q = 0; q + 1 < n; ++q) {
      const Matrix forward = embed(sum, d, n, q);
      gens.push_back(forward);
      // reversed control: conjugate by Fourier on both qudits maps sum to its mirror up to Cliffords
      const Matrix ff = embed(kron(f, f), d, n, q);
      gens.push_back(ff * forward * ff.adjoint());
    }
  }
  return gens;
}

std::vector<Matrix> stabilizer_states(int d, int n) {
  require_odd_prime(d);
  if (ipow(static_cast<std::size_t>(d), 2 * n) > 100000) throw SizeLimitError("stabilizer enumeration too large");
  const auto gens = clifford_generators(d, n);
  const auto dim = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), n));

  Vector start = Vector::Zero(dim);
  start(0) = 1.0;
  std::set<std::vector<long long>> seen;
  std::deque<Vector> queue;
  std::vector<Matrix> states;
  seen.insert(canonical_key(start));
  queue.push_back(start);
  while (!queue.empty()) {
    Vector psi = std::move(queue.front());
    queue.pop_front();
    states.push_back(psi * psi.adjoint());
    for (const auto& g : gens) {
      Vector next = g * psi;
      if (seen.insert(canonical_key(next)).second) queue.push_back(std::move(next));
    }
  }
  return states;
}

}  // namespace magiclab
