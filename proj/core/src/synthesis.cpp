#include "magiclab/synthesis.hpp"

#include <cmath>
#include <limits>

namespace magiclab {

namespace {

constexpr double kManaZero = 1e-9;
constexpr double kThaumaZero = 1e-6;

double inner(const Matrix& a, const Matrix& b) { return (a.conjugate().cwiseProduct(b)).sum().real(); }

bool thauma_allowed(const Channel& c, const ThaumaOptions& options) {
  return options.force || c.n_in() + c.n_out() <= options.max_channel_qudits;
}

}  // namespace

double measure_ratio(double target, double resource, double zero_tol) {
  if (target <= zero_tol) return 0.0;
  if (resource <= zero_tol) return std::numeric_limits<double>::infinity();
  return target / resource;
}

std::optional<long> count_ceiling(double k) {
  if (!std::isfinite(k)) return std::nullopt;
  return std::max(0L, static_cast<long>(std::ceil(k - 1e-6)));
}

SynthesisBound exact_bound(const Channel& target, const Channel& resource, const ThaumaOptions& options,
                           const std::string& target_name, const std::string& resource_name) {
  SynthesisBound b;
  b.target = target_name;
  b.resource = resource_name;
  b.mana_target = mana_channel(target).log2_value;
  b.mana_resource = mana_channel(resource).log2_value;
  b.mana_ratio = measure_ratio(b.mana_target, b.mana_resource, kManaZero);
  b.bound = b.mana_ratio;
  if (thauma_allowed(target, options) && thauma_allowed(resource, options)) {
    b.thauma_target = max_thauma_channel(target, options).log2_value;
    b.thauma_resource = max_thauma_channel(resource, options).log2_value;
    b.thauma_ratio = measure_ratio(*b.thauma_target, *b.thauma_resource, kThaumaZero);
    b.bound = std::max(b.bound, *b.thauma_ratio);
  } else {
    b.note = "thauma ratio omitted: channel exceeds the max-thauma size gate";
  }
  b.ceiling = count_ceiling(b.bound);
  return b;
}

double noisy_bound(const Channel& target, const Channel& resource) {
  return measure_ratio(mana_channel(target).log2_value, mana_channel(resource).log2_value, kManaZero);
}

ApproxBound approx_bound(const Channel& target, const Channel& resource, double epsilon,
                         const ThaumaOptions& options) {
  if (!(epsilon >= 0.0)) throw ValidationError("epsilon must be non-negative");
  if (target.n_in() + target.n_out() > options.max_channel_qudits && !options.force) {
    throw SizeLimitError("approximate synthesis bound is limited to n_in + n_out <= " +
                         std::to_string(options.max_channel_qudits) + " qudits (use force to override)");
  }
  ApproxBound r;
  r.epsilon = epsilon;
  r.mana_resource = mana_channel(resource).log2_value;

  if (epsilon == 0.0) {
    const auto m = mana_channel(target);
    r.min_row_norm = m.exp_value;
    r.mana_approximation = m.log2_value;
    r.approximation = target.choi();
  } else {
    const int d = target.d();
    const auto din = target.dim_in();
    const auto dout = target.dim_out();
    const auto dim = static_cast<int>(din * dout);
    const Matrix id_out = Matrix::Identity(dout, dout);
    const Matrix& j_target = target.choi();

    std::vector<Matrix> in_ops;
    std::vector<Matrix> out_ops;
    for (std::size_t u = 0; u < ipow(static_cast<std::size_t>(d * d), target.n_in()); ++u) {
      in_ops.push_back(phase_point_operator(d, point_at(d, target.n_in(), u)).matrix().transpose());
    }
    for (std::size_t v = 0; v < ipow(static_cast<std::size_t>(d * d), target.n_out()); ++v) {
      out_ops.push_back(phase_point_operator(d, point_at(d, target.n_out(), v)).matrix());
    }
    const auto rows_u = static_cast<int>(in_ops.size());
    const auto cols_v = static_cast<int>(out_ops.size());

    // blocks: J~ (approximation), Y, Z = Y - J_N + J~, Q = eps 1 - tr_B Y
    conic::Problem p;
    const int jt = p.add_psd(dim);
    const int y = p.add_psd(dim);
    const int z = p.add_psd(dim);
    const int q = p.add_psd(static_cast<int>(din));
    const int split = p.add_nonneg(2 * rows_u * cols_v);
    const int slack = p.add_nonneg(rows_u);
    const int t = p.add_nonneg(1);
    p.set_nonneg_cost(t, 1.0);

    for (const auto& e : conic::hermitian_basis(dim)) {
      const int row = p.add_row(inner(e, j_target));
      p.add_psd_coeff(row, y, e);
      p.add_psd_coeff(row, jt, e);
      p.add_psd_coeff(row, z, -e);
    }
    for (const auto& e : conic::hermitian_basis(din)) {
      const Matrix lifted = kron(e, id_out);
      const int rq = p.add_row(epsilon * e.trace().real());
      p.add_psd_coeff(rq, q, e);
      p.add_psd_coeff(rq, y, lifted);
      const int rt = p.add_row(e.trace().real());
      p.add_psd_coeff(rt, jt, lifted);
    }
    const double scale = 1.0 / static_cast<double>(dout);
    for (int u = 0; u < rows_u; ++u) {
      for (int v = 0; v < cols_v; ++v) {
        const int k = u * cols_v + v;
        const int row = p.add_row(0.0);
        p.add_psd_coeff(row, jt,
                        scale * kron(in_ops[static_cast<std::size_t>(u)], out_ops[static_cast<std::size_t>(v)]));
        p.set_nonneg_coeff(row, split + 2 * k, -1.0);
        p.set_nonneg_coeff(row, split + 2 * k + 1, 1.0);
      }
    }
    for (int u = 0; u < rows_u; ++u) {
      const int row = p.add_row(0.0);
      for (int v = 0; v < cols_v; ++v) {
        const int k = u * cols_v + v;
        p.set_nonneg_coeff(row, split + 2 * k, 1.0);
        p.set_nonneg_coeff(row, split + 2 * k + 1, 1.0);
      }
      p.set_nonneg_coeff(row, slack + u, 1.0);
      p.set_nonneg_coeff(row, t, -1.0);
    }
    const auto sol = conic::solve(p, options.solver);
    // Unitary targets put the optimum on the boundary of the PSD cone and small
    // epsilon can stall the primal side. A dual-feasible point still certifies
    // a lower bound on t, so in that case the dual value is reported.
    const bool dual_usable = sol.status == conic::Status::Inaccurate && sol.dual_residual <= 1e-7 &&
                             sol.relative_gap <= 1e-3;
    if (!sol.optimal() && !dual_usable) {
      throw SolverError("approximate synthesis bound: solver returned " + conic::to_string(sol.status));
    }
    r.solver_status = conic::to_string(sol.status);
    r.min_row_norm = sol.optimal() ? sol.primal_value : sol.dual_value;
    r.mana_approximation = std::log2(std::max(r.min_row_norm, 1.0));
    r.approximation = sol.X[static_cast<std::size_t>(jt)];
  }
  r.k = measure_ratio(r.mana_approximation, r.mana_resource, kThaumaZero);
  r.bound = count_ceiling(r.k);
  return r;
}

double diamond_distance(int d, int n_in, int n_out, const Matrix& choi_difference, const conic::Settings& settings) {
  const auto din = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), n_in));
  const auto dout = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(d), n_out));
  const auto dim = din * dout;
  if (choi_difference.rows() != dim || choi_difference.cols() != dim) throw DimensionError("Choi shape mismatch");
  const Matrix id_out = Matrix::Identity(dout, dout);

  // minimize -<J, W> with W, rho, Z = rho (x) 1 - W all PSD and tr rho = 1
  conic::Problem p;
  const int w = p.add_psd(static_cast<int>(dim));
  const int rho = p.add_psd(static_cast<int>(din));
  const int z = p.add_psd(static_cast<int>(dim));
  p.set_psd_cost(w, -(choi_difference + choi_difference.adjoint()) / 2.0);
  for (const auto& e : conic::hermitian_basis(dim)) {
    const int row = p.add_row(0.0);
    p.add_psd_coeff(row, z, e);
    p.add_psd_coeff(row, w, e);
    // <E, rho (x) 1> = <tr_B E, rho>
    Matrix partial = Matrix::Zero(din, din);
    for (Eigen::Index i = 0; i < din; ++i) {
      for (Eigen::Index j = 0; j < din; ++j) partial(i, j) = e.block(i * dout, j * dout, dout, dout).trace();
    }
    p.add_psd_coeff(row, rho, -partial);
  }
  const int tr = p.add_row(1.0);
  p.add_psd_coeff(tr, rho, Matrix::Identity(din, din));
  const auto sol = conic::solve(p, settings);
  if (!sol.optimal() && sol.status != conic::Status::Inaccurate) {
    throw SolverError("diamond distance: solver returned " + conic::to_string(sol.status));
  }
  return -sol.primal_value;
}

double diamond_distance(const Channel& a, const Channel& b, const conic::Settings& settings) {
  if (a.d() != b.d() || a.n_in() != b.n_in() || a.n_out() != b.n_out()) throw DimensionError("channel shape mismatch");
  return diamond_distance(a.d(), a.n_in(), a.n_out(), a.choi() - b.choi(), settings);
}

}  // namespace magiclab
