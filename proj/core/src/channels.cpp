#include "magiclab/channels.hpp"

#include <cmath>
#include <numbers>
#include <Eigen/Eigenvalues>

#include "magiclab/phase_space.hpp"
#include "tensor.hpp"

namespace magiclab {

namespace {

constexpr double kKrausCutoff = 1e-12;

Eigen::Index dim_of(int d, int n) { return static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), n)); }

Matrix choi_from_kraus(const std::vector<Matrix>& kraus, Eigen::Index dim_in, Eigen::Index dim_out) {
  Matrix v(dim_in * dim_out, static_cast<Eigen::Index>(kraus.size()));
  for (std::size_t k = 0; k < kraus.size(); ++k) {
    const Matrix& op = kraus[k];
    for (Eigen::Index i = 0; i < dim_in; ++i) {
      v.col(static_cast<Eigen::Index>(k)).segment(i * dim_out, dim_out) = op.col(i);
    }
  }
  return v * v.adjoint();
}

void require_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

Channel::Channel(int d, int n_in, int n_out, Kind kind, Matrix choi, std::vector<Matrix> kraus)
    : d_(d),
      n_in_(n_in),
      n_out_(n_out),
      dim_in_(dim_of(d, n_in)),
      dim_out_(dim_of(d, n_out)),
      kind_(kind),
      choi_(std::move(choi)),
      kraus_(std::move(kraus)) {}

Channel Channel::from_choi(int d, int n_in, int n_out, Matrix choi, double tol) {
  require_odd_prime(d);
  if (n_in < 1 || n_out < 1) throw DimensionError("channel needs input and output qudits");
  const auto dim = dim_of(d, n_in) * dim_of(d, n_out);
  if (choi.rows() != dim || choi.cols() != dim) throw DimensionError("Choi matrix shape mismatch");
  if ((choi - choi.adjoint()).cwiseAbs().maxCoeff() > tol) throw ValidationError("Choi matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(choi, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -tol) throw ValidationError("Choi matrix is not positive semidefinite");
  return Channel(d, n_in, n_out, Kind::ChoiOnly, std::move(choi), {});
}

Channel Channel::from_unitary(const Operator& u, double tol) {
  const Matrix& m = u.matrix();
  if ((m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() > tol) {
    throw ValidationError("operator is not unitary");
  }
  Matrix choi = choi_from_kraus({m}, m.cols(), m.rows());
  return Channel(u.d(), u.n(), u.n(), Kind::Unitary, std::move(choi), {m});
}

Channel Channel::from_kraus(int d, int n_in, int n_out, std::vector<Matrix> kraus) {
  require_odd_prime(d);
  if (kraus.empty()) throw ValidationError("empty Kraus list");
  const auto di = dim_of(d, n_in);
  const auto dout = dim_of(d, n_out);
  for (const auto& k : kraus) {
    if (k.rows() != dout || k.cols() != di) throw DimensionError("Kraus operator shape mismatch");
  }
  Matrix choi = choi_from_kraus(kraus, di, dout);
  return Channel(d, n_in, n_out, Kind::Kraus, std::move(choi), std::move(kraus));
}

std::vector<Matrix> Channel::kraus_operators() const {
  if (!kraus_.empty()) return kraus_;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(choi_);
  std::vector<Matrix> out;
  for (Eigen::Index k = eig.eigenvalues().size() - 1; k >= 0; --k) {
    const double lambda = eig.eigenvalues()(k);
    if (lambda <= kKrausCutoff) continue;
    Matrix op(dim_out_, dim_in_);
    const Vector col = std::sqrt(lambda) * eig.eigenvectors().col(k);
    for (Eigen::Index i = 0; i < dim_in_; ++i) op.col(i) = col.segment(i * dim_out_, dim_out_);
    out.push_back(std::move(op));
  }
  if (out.empty()) out.push_back(Matrix::Zero(dim_out_, dim_in_));
  return out;
}

bool Channel::is_trace_preserving(double tol) const {
  for (Eigen::Index i = 0; i < dim_in_; ++i) {
    for (Eigen::Index j = 0; j < dim_in_; ++j) {
      const Complex tr = choi_.block(i * dim_out_, j * dim_out_, dim_out_, dim_out_).trace();
      if (std::abs(tr - (i == j ? 1.0 : 0.0)) > tol) return false;
    }
  }
  return true;
}

Matrix choi_from_map(int d, int n_in, int n_out, const std::function<Matrix(const Matrix&)>& map) {
  const auto di = dim_of(d, n_in);
  const auto dout = dim_of(d, n_out);
  Matrix choi = Matrix::Zero(di * dout, di * dout);
  for (Eigen::Index i = 0; i < di; ++i) {
    for (Eigen::Index j = 0; j < di; ++j) {
      Matrix unit = Matrix::Zero(di, di);
      unit(i, j) = 1.0;
      const Matrix image = map(unit);
      if (image.rows() != dout || image.cols() != dout) throw DimensionError("map output shape mismatch");
      choi.block(i * dout, j * dout, dout, dout) = image;
    }
  }
  return choi;
}

Operator apply(const Channel& channel, const Operator& rho) {
  if (rho.d() != channel.d() || rho.n() != channel.n_in()) throw DimensionError("input does not match channel");
  const auto di = channel.dim_in();
  const auto dout = channel.dim_out();
  Matrix out = Matrix::Zero(dout, dout);
  const Matrix& j = channel.choi();
  for (Eigen::Index a = 0; a < di; ++a) {
    for (Eigen::Index b = 0; b < di; ++b) {
      const Complex r = rho.matrix()(a, b);
      if (r == Complex(0.0)) continue;
      out += r * j.block(a * dout, b * dout, dout, dout);
    }
  }
  return Operator(channel.d(), channel.n_out(), std::move(out));
}

Operator apply_kraus(const Channel& channel, const Operator& rho) {
  if (rho.d() != channel.d() || rho.n() != channel.n_in()) throw DimensionError("input does not match channel");
  Matrix out = Matrix::Zero(channel.dim_out(), channel.dim_out());
  for (const auto& k : channel.kraus_operators()) out += k * rho.matrix() * k.adjoint();
  return Operator(channel.d(), channel.n_out(), std::move(out));
}

Operator apply_local(const Channel& channel, const Operator& rho, std::span<const int> targets) {
  if (rho.d() != channel.d()) throw DimensionError("dimension mismatch");
  if (channel.n_in() != channel.n_out() || channel.n_in() != static_cast<int>(targets.size())) {
    throw DimensionError("local application needs a k -> k channel on k targets");
  }
  const int d = rho.d();
  const int n = rho.n();
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (const auto& k : channel.kraus_operators()) {
    const Matrix left = detail::apply_left_local(k, rho.matrix(), d, n, targets);
    out += detail::apply_left_local(k, left.adjoint(), d, n, targets).adjoint();
  }
  return Operator(d, n, std::move(out));
}

Channel compose(const Channel& second, const Channel& first) {
  if (second.d() != first.d() || second.n_in() != first.n_out()) {
    throw DimensionError("cannot compose channels with mismatched interfaces");
  }
  if (second.kind() == Channel::Kind::Unitary && first.kind() == Channel::Kind::Unitary) {
    return Channel::from_unitary(Operator(first.d(), first.n_in(), *second.unitary() * *first.unitary()), 1e-8);
  }
  const auto k2 = second.kraus_operators();
  const auto k1 = first.kraus_operators();
  std::vector<Matrix> kraus;
  kraus.reserve(k1.size() * k2.size());
  for (const auto& b : k2) {
    for (const auto& a : k1) kraus.push_back(b * a);
  }
  return Channel::from_kraus(first.d(), first.n_in(), second.n_out(), std::move(kraus));
}

Channel tensor(const Channel& a, const Channel& b) {
  if (a.d() != b.d()) throw DimensionError("mixed local dimensions are not supported");
  const int d = a.d();
  const int n_in = a.n_in() + b.n_in();
  const int n_out = a.n_out() + b.n_out();
  // kron(J_a, J_b) is ordered (A1 B1 A2 B2); bring it to (A1 A2 B1 B2)
  std::vector<int> order;
  for (int k = 0; k < a.n_in(); ++k) order.push_back(k);
  for (int k = 0; k < b.n_in(); ++k) order.push_back(a.n_in() + a.n_out() + k);
  for (int k = 0; k < a.n_out(); ++k) order.push_back(a.n_in() + k);
  for (int k = 0; k < b.n_out(); ++k) order.push_back(a.n_in() + a.n_out() + b.n_in() + k);
  Matrix choi = detail::permute_qudits(kron(a.choi(), b.choi()), d, order);

  if (a.kind() == Channel::Kind::ChoiOnly || b.kind() == Channel::Kind::ChoiOnly) {
    return Channel(d, n_in, n_out, Channel::Kind::ChoiOnly, std::move(choi), {});
  }
  std::vector<Matrix> kraus;
  for (const auto& ka : a.kraus_operators()) {
    for (const auto& kb : b.kraus_operators()) kraus.push_back(kron(ka, kb));
  }
  const bool unitary = a.kind() == Channel::Kind::Unitary && b.kind() == Channel::Kind::Unitary;
  return Channel(d, n_in, n_out, unitary ? Channel::Kind::Unitary : Channel::Kind::Kraus, std::move(choi),
                 std::move(kraus));
}

Channel tensor_power(const Channel& a, int copies) {
  if (copies < 1) throw DimensionError("tensor power needs at least one copy");
  Channel out = a;
  for (int k = 1; k < copies; ++k) out = tensor(out, a);
  return out;
}

Channel identity_channel(int d, int n) {
  return Channel::from_unitary(Operator::identity(d, n));
}

Channel unitary_channel(int d, int n, const Matrix& u) {
  return Channel::from_unitary(Operator(d, n, u));
}

Matrix t_gate_matrix() {
  const Complex xi = std::polar(1.0, 2.0 * std::numbers::pi / 9.0);
  Matrix t = Matrix::Zero(3, 3);
  t(0, 0) = xi;
  t(1, 1) = 1.0;
  t(2, 2) = std::conj(xi);
  return t;
}

Channel t_gate() { return unitary_channel(3, 1, t_gate_matrix()); }

Channel t_dagger() { return unitary_channel(3, 1, t_gate_matrix().adjoint()); }

Channel u_theta(double theta) {
  Matrix u = Matrix::Zero(3, 3);
  u(0, 0) = std::polar(1.0, theta / 9.0);
  u(1, 1) = 1.0;
  u(2, 2) = std::polar(1.0, -theta / 9.0);
  return unitary_channel(3, 1, u);
}

Matrix ccx_matrix() {
  Matrix u = Matrix::Zero(27, 27);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        const int target = (c + a * b) % 3;
        u(a * 9 + b * 3 + target, a * 9 + b * 3 + c) = 1.0;
      }
    }
  }
  return u;
}

Channel ccx() { return unitary_channel(3, 3, ccx_matrix()); }

Matrix fourier_matrix(int d) {
  require_odd_prime(d);
  Matrix f(d, d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(d)), 2.0 * std::numbers::pi * j * k / d);
  }
  return f;
}

Matrix phase_gate_matrix(int d) {
  require_odd_prime(d);
  Matrix s = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    const int exponent = (j * (j - 1) / 2) % d;
    s(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * exponent / d);
  }
  return s;
}

Matrix csum_matrix(int d) {
  require_odd_prime(d);
  Matrix u = Matrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) u(a * d + (a + b) % d, a * d + b) = 1.0;
  }
  return u;
}

Channel depolarizing(int d, double p) {
  require_odd_prime(d);
  require_probability(p, "depolarizing parameter");
  const Matrix x = shift_matrix(d);
  const Matrix z = clock_matrix(d);
  std::vector<Matrix> kraus;
  kraus.push_back(std::sqrt(1.0 - p) * Matrix::Identity(d, d));
  const double weight = std::sqrt(p / (d * d - 1.0));
  Matrix xi = Matrix::Identity(d, d);
  for (int i = 0; i < d; ++i) {
    Matrix zj = Matrix::Identity(d, d);
    for (int j = 0; j < d; ++j) {
      if (i != 0 || j != 0) kraus.push_back(weight * xi * zj);
      zj = zj * z;
    }
    xi = xi * x;
  }
  return Channel::from_kraus(d, 1, 1, std::move(kraus));
}

Channel dephasing(std::span<const double> probs) {
  const auto d = static_cast<int>(probs.size());
  require_odd_prime(d);
  double total = 0.0;
  for (double p : probs) {
    require_probability(p, "dephasing weight");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("dephasing weights must sum to 1");
  const Matrix z = clock_matrix(d);
  std::vector<Matrix> kraus;
  Matrix zk = Matrix::Identity(d, d);
  for (int k = 0; k < d; ++k) {
    kraus.push_back(std::sqrt(probs[static_cast<std::size_t>(k)]) * zk);
    zk = zk * z;
  }
  return Channel::from_kraus(d, 1, 1, std::move(kraus));
}

Channel werner_holevo() {
  Matrix choi = choi_from_map(3, 1, 1, [](const Matrix& v) -> Matrix {
    return 0.5 * (v.trace() * Matrix::Identity(3, 3) - v.transpose());
  });
  return Channel::from_choi(3, 1, 1, std::move(choi));
}

Channel replacer(const Operator& sigma, int n_in) {
  sigma.require_hermitian();
  const auto di = dim_of(sigma.d(), n_in);
  Matrix choi = kron(Matrix(Matrix::Identity(di, di)), sigma.matrix());
  return Channel::from_choi(sigma.d(), n_in, sigma.n(), std::move(choi));
}

Operator state_library(const std::string& name, int d) {
  require_odd_prime(d);
  auto pure = [d](const Vector& psi, int n) { return Operator(d, n, psi * psi.adjoint()); };
  if (name == "+") {
    return pure(Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d))), 1);
  }
  if (name == "T") {
    if (d != 3) throw DimensionError("the T state is defined for qutrits");
    const Vector plus = Vector::Constant(3, 1.0 / std::sqrt(3.0));
    return pure(t_gate_matrix() * plus, 1);
  }
  if (name == "mixed") return Operator(d, 1, Matrix::Identity(d, d) / static_cast<double>(d));
  if (name == "Phi") {
    Vector psi = Vector::Zero(d * d);
    for (int i = 0; i < d; ++i) psi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    return pure(psi, 2);
  }
  if (!name.empty() && name.find_first_not_of("0123456789") == std::string::npos) {
    const int j = std::stoi(name);
    if (j >= d) throw ValidationError("basis state index out of range: " + name);
    Vector psi = Vector::Zero(d);
    psi(j) = 1.0;
    return pure(psi, 1);
  }
  throw ValidationError("unknown state name: " + name);
}

std::vector<std::string> state_names() { return {"0", "1", "2", "+", "T", "mixed", "Phi"}; }

}  // namespace magiclab
