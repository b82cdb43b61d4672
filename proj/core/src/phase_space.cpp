#include "magiclab/phase_space.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <Eigen/Eigenvalues>

#include "magiclab/channels.hpp"
#include "tensor.hpp"

namespace magiclab {

Matrix shift_matrix(int d) {
  require_odd_prime(d);
  Matrix x = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) x((j + 1) % d, j) = 1.0;
  return x;
}

Matrix clock_matrix(int d) {
  require_odd_prime(d);
  Matrix z = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) z(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / d);
  return z;
}

namespace {

Matrix single_weyl(int d, int a1, int a2) {
  // tau^{-a1 a2} with tau = exp(i pi (d+1)/d); tau has order 2d when d is odd.
  const long exponent = (static_cast<long>(a1) * a2) % (2L * d);
  const Complex phase = std::polar(1.0, -std::numbers::pi * (d + 1) * static_cast<double>(exponent) / d);
  Matrix zp = Matrix::Identity(d, d);
  Matrix xp = Matrix::Identity(d, d);
  const Matrix z = clock_matrix(d);
  const Matrix x = shift_matrix(d);
  for (int k = 0; k < a1; ++k) zp = zp * z;
  for (int k = 0; k < a2; ++k) xp = xp * x;
  return phase * zp * xp;
}

}  // namespace

PhaseSpace::PhaseSpace(int d) : d_(d) {
  const int dd = d * d;
  weyl_ops_.reserve(static_cast<std::size_t>(dd));
  for (int a1 = 0; a1 < d; ++a1) {
    for (int a2 = 0; a2 < d; ++a2) weyl_ops_.push_back(single_weyl(d, a1, a2));
  }
  Matrix a0 = Matrix::Zero(d, d);
  for (const auto& t : weyl_ops_) a0 += t;
  a0 /= static_cast<double>(d);
  point_ops_.reserve(static_cast<std::size_t>(dd));
  for (const auto& t : weyl_ops_) point_ops_.push_back(t * a0 * t.adjoint());

  forward_.resize(dd, dd);
  forward_transposed_.resize(dd, dd);
  inverse_.resize(dd, dd);
  for (int u = 0; u < dd; ++u) {
    const Matrix& a = point_ops_[static_cast<std::size_t>(u)];
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        forward_(u, i * d + j) = a(j, i);
        forward_transposed_(u, i * d + j) = a(i, j);
        inverse_(i * d + j, u) = a(i, j);
      }
    }
  }
}

const PhaseSpace& PhaseSpace::of(int d) {
  require_odd_prime(d);
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<PhaseSpace>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[d];
  if (!slot) slot.reset(new PhaseSpace(d));
  return *slot;
}

Operator weyl_operator(int d, const PhasePoint& point) {
  const auto& space = PhaseSpace::of(d);
  if (point.qudits() < 1) throw DimensionError("phase point has no components");
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& [a1, a2] : point.components) {
    if (a1 < 0 || a1 >= d || a2 < 0 || a2 >= d) throw DimensionError("phase point component out of range");
    out = kron(out, space.weyl(a1 * d + a2));
  }
  return Operator(d, point.qudits(), std::move(out));
}

Operator phase_point_operator(int d, const PhasePoint& point) {
  const auto& space = PhaseSpace::of(d);
  if (point.qudits() < 1) throw DimensionError("phase point has no components");
  Matrix out = Matrix::Identity(1, 1);
  for (const auto& [a1, a2] : point.components) {
    if (a1 < 0 || a1 >= d || a2 < 0 || a2 >= d) throw DimensionError("phase point component out of range");
    out = kron(out, space.point_operator(a1 * d + a2));
  }
  return Operator(d, point.qudits(), std::move(out));
}

RealVector phase_space_coefficients(int d, const Matrix& x, const std::vector<bool>& transposed) {
  const auto& space = PhaseSpace::of(d);
  const auto modes = static_cast<int>(transposed.size());
  if (modes < 1) throw DimensionError("no tensor factors");
  if (static_cast<std::size_t>(x.rows()) != ipow(static_cast<std::size_t>(d), modes) || x.rows() != x.cols()) {
    throw DimensionError("operator shape does not match qudit count");
  }
  auto data = detail::to_pair_tensor(x, d, modes);
  const auto dd = static_cast<std::size_t>(d * d);
  for (int k = 0; k < modes; ++k) {
    detail::apply_mode(data, modes, k, dd,
                       transposed[static_cast<std::size_t>(k)] ? space.forward_transposed() : space.forward());
  }
  RealVector out(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) out(static_cast<Eigen::Index>(i)) = data[i].real();
  return out;
}

WignerTable wigner_of_state(const Operator& x, double tol) {
  x.require_hermitian(tol);
  RealVector w = phase_space_coefficients(x.d(), x.matrix(), std::vector<bool>(static_cast<std::size_t>(x.n()), false));
  w /= static_cast<double>(x.dim());
  return WignerTable(x.d(), 0, x.n(), RealMatrix(w.transpose()));
}

WignerTable wigner_of_measurement(const Operator& effect, double tol) {
  effect.require_hermitian(tol);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(effect.matrix(), Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  if (ev.minCoeff() < -tol || ev.maxCoeff() > 1.0 + tol) {
    throw ValidationError("measurement effect must satisfy 0 <= E <= 1");
  }
  RealVector w =
      phase_space_coefficients(effect.d(), effect.matrix(), std::vector<bool>(static_cast<std::size_t>(effect.n()), false));
  return WignerTable(effect.d(), 0, effect.n(), RealMatrix(w.transpose()));
}

WignerTable wigner_of_choi(int d, int n_in, int n_out, const Matrix& choi) {
  if (n_in < 1 || n_out < 1) throw DimensionError("channel needs input and output qudits");
  std::vector<bool> transposed(static_cast<std::size_t>(n_in + n_out), false);
  for (int k = 0; k < n_in; ++k) transposed[static_cast<std::size_t>(k)] = true;
  RealVector w = phase_space_coefficients(d, choi, transposed);
  w /= static_cast<double>(ipow(static_cast<std::size_t>(d), n_out));
  const auto rows = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d * d), n_in));
  const auto cols = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d * d), n_out));
  // w is ordered (u, v) with u most significant: a row-major rows x cols array
  RealMatrix values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      w.data(), rows, cols);
  return WignerTable(d, n_in, n_out, std::move(values));
}

WignerTable wigner_of_channel(const Channel& channel) {
  return wigner_of_choi(channel.d(), channel.n_in(), channel.n_out(), channel.choi());
}

Operator reconstruct(const WignerTable& table) {
  if (table.n_in() != 0) throw DimensionError("reconstruct expects a state or operator table");
  const int d = table.d();
  const int n = table.n_out();
  const auto& space = PhaseSpace::of(d);
  std::vector<Complex> data(static_cast<std::size_t>(table.cols()));
  for (Eigen::Index v = 0; v < table.cols(); ++v) data[static_cast<std::size_t>(v)] = table[v];
  const auto dd = static_cast<std::size_t>(d * d);
  for (int k = 0; k < n; ++k) detail::apply_mode(data, n, k, dd, space.inverse());
  return Operator(d, n, detail::from_pair_tensor(data, d, n));
}

WignerTable propagate(const WignerTable& state, const WignerTable& channel, std::span<const int> targets) {
  if (state.n_in() != 0) throw DimensionError("propagate expects a state table as input");
  if (state.d() != channel.d()) throw DimensionError("dimension mismatch");
  const auto k = static_cast<int>(targets.size());
  if (channel.n_in() != k || channel.n_out() != k) {
    throw DimensionError("channel table must map the target qudits onto themselves");
  }
  const int n = state.n_out();
  const auto dd = static_cast<std::size_t>(state.d() * state.d());
  const auto idx = detail::local_index(dd, n, targets);
  const auto local = static_cast<Eigen::Index>(idx.offset.size());

  RealMatrix out(1, state.cols());
  RealVector in_local(local);
  for (std::size_t base : idx.base) {
    for (Eigen::Index u = 0; u < local; ++u) {
      in_local(u) = state[static_cast<Eigen::Index>(base + idx.offset[static_cast<std::size_t>(u)])];
    }
    const RealVector res = channel.values().transpose() * in_local;
    for (Eigen::Index v = 0; v < local; ++v) {
      out(0, static_cast<Eigen::Index>(base + idx.offset[static_cast<std::size_t>(v)])) = res(v);
    }
  }
  return WignerTable(state.d(), 0, n, std::move(out));
}

WignerTable compose_tables(const WignerTable& second, const WignerTable& first) {
  if (second.d() != first.d() || second.n_in() != first.n_out() || first.n_in() < 1) {
    throw DimensionError("cannot compose tables with mismatched interfaces");
  }
  return WignerTable(first.d(), first.n_in(), second.n_out(), first.values() * second.values());
}

WignerTable tensor_tables(const WignerTable& a, const WignerTable& b) {
  if (a.d() != b.d()) throw DimensionError("mixed local dimensions are not supported");
  const RealMatrix& x = a.values();
  const RealMatrix& y = b.values();
  RealMatrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  }
  return WignerTable(a.d(), a.n_in() + b.n_in(), a.n_out() + b.n_out(), std::move(out));
}

double wigner_trace_norm(const Operator& v) {
  return wigner_of_state(v).values().cwiseAbs().sum();
}

double wigner_spectral_norm(const Operator& v) {
  v.require_hermitian();
  const RealVector c = phase_space_coefficients(v.d(), v.matrix(), std::vector<bool>(static_cast<std::size_t>(v.n()), false));
  return c.cwiseAbs().maxCoeff();
}

}  // namespace magiclab
