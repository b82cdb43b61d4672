#include "magiclab/types.hpp"

#include <limits>
#include <sstream>

namespace magiclab {

bool is_odd_prime(int d) noexcept {
  if (d < 3 || d % 2 == 0) return false;
  for (int k = 3; k * k <= d; k += 2) {
    if (d % k == 0) return false;
  }
  return true;
}

void require_odd_prime(int d) {
  if (!is_odd_prime(d)) {
    throw DimensionError("local dimension must be an odd prime, got " + std::to_string(d));
  }
}

std::size_t ipow(std::size_t base, int exponent) {
  if (exponent < 0) throw DimensionError("negative exponent");
  std::size_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && result > std::numeric_limits<std::size_t>::max() / base) {
      throw DimensionError("dimension overflow");
    }
    result *= base;
  }
  return result;
}

std::size_t point_index(int d, const PhasePoint& point) {
  std::size_t index = 0;
  for (const auto& [a1, a2] : point.components) {
    if (a1 < 0 || a1 >= d || a2 < 0 || a2 >= d) {
      throw DimensionError("phase point component out of range");
    }
    index = index * static_cast<std::size_t>(d * d) + static_cast<std::size_t>(a1 * d + a2);
  }
  return index;
}

PhasePoint point_at(int d, int n, std::size_t index) {
  PhasePoint point;
  point.components.resize(static_cast<std::size_t>(n));
  const auto dd = static_cast<std::size_t>(d * d);
  for (int k = n - 1; k >= 0; --k) {
    const auto local = static_cast<int>(index % dd);
    index /= dd;
    point.components[static_cast<std::size_t>(k)] = {local / d, local % d};
  }
  if (index != 0) throw DimensionError("phase point index out of range");
  return point;
}

std::string to_string(const PhasePoint& point) {
  std::ostringstream out;
  out << '[';
  for (std::size_t k = 0; k < point.components.size(); ++k) {
    if (k) out << ',';
    out << '(' << point.components[k][0] << ',' << point.components[k][1] << ')';
  }
  out << ']';
  return out.str();
}

Operator::Operator(int d, int n, Matrix entries) : d_(d), n_(n), entries_(std::move(entries)) {
  require_odd_prime(d);
  if (n < 1) throw DimensionError("operator needs at least one qudit");
  const auto dim = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), n));
  if (entries_.rows() != dim || entries_.cols() != dim) {
    throw DimensionError("operator shape " + std::to_string(entries_.rows()) + "x" +
                         std::to_string(entries_.cols()) + " does not match d^n = " +
                         std::to_string(dim));
  }
}

Operator Operator::identity(int d, int n) {
  const auto dim = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), n));
  return Operator(d, n, Matrix::Identity(dim, dim));
}

Operator Operator::zero(int d, int n) {
  const auto dim = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), n));
  return Operator(d, n, Matrix::Zero(dim, dim));
}

bool Operator::is_hermitian(double tol) const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void Operator::require_hermitian(double tol) const {
  if (!is_hermitian(tol)) throw ValidationError("operator is not Hermitian");
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Operator kron(const Operator& a, const Operator& b) {
  if (a.d() != b.d()) throw DimensionError("mixed local dimensions are not supported");
  return Operator(a.d(), a.n() + b.n(), kron(a.matrix(), b.matrix()));
}

WignerTable::WignerTable(int d, int n_in, int n_out, RealMatrix values)
    : d_(d), n_in_(n_in), n_out_(n_out), values_(std::move(values)) {
  require_odd_prime(d);
  if (n_in < 0 || n_out < 1) throw DimensionError("invalid Wigner table qudit counts");
  const auto rows = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d * d), n_in));
  const auto cols = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d * d), n_out));
  if (values_.rows() != rows || values_.cols() != cols) {
    throw DimensionError("Wigner table shape does not match (d^2)^n_in x (d^2)^n_out");
  }
}

RealVector WignerTable::row_norms() const { return values_.cwiseAbs().rowwise().sum(); }

}  // namespace magiclab
