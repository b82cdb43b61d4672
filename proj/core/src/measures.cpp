#include "magiclab/measures.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <Eigen/Eigenvalues>

#include "magiclab/stabilizer.hpp"

namespace magiclab {

namespace {

constexpr double kAcceptableResidual = 1e-5;

void check_solution(const conic::Solution& sol, const char* what) {
  if (sol.optimal()) return;
  if (sol.status == conic::Status::Inaccurate && sol.primal_residual <= kAcceptableResidual &&
      sol.dual_residual <= kAcceptableResidual && sol.relative_gap <= kAcceptableResidual) {
    return;
  }
  throw SolverError(std::string(what) + ": solver returned " + conic::to_string(sol.status));
}

// Multi-qudit phase-point operators, in enumeration order.
std::vector<Matrix> point_operators(int d, int n) {
  const std::size_t count = ipow(static_cast<std::size_t>(d * d), n);
  std::vector<Matrix> ops;
  ops.reserve(count);
  for (std::size_t u = 0; u < count; ++u) ops.push_back(phase_point_operator(d, point_at(d, n, u)).matrix());
  return ops;
}

// Adds rows <E_k, lhs> = <E_k, target> for a Hermitian basis; the caller fills the
// variable coefficients through `add`.
template <typename AddFn>
void add_matrix_equality(conic::Problem& p, const Matrix& target, AddFn add) {
  for (const auto& e : conic::hermitian_basis(target.rows())) {
    const int row = p.add_row((e.conjugate().cwiseProduct(target)).sum().real());
    add(row, e);
  }
}

}  // namespace

void require_state(const Operator& rho, double tol) {
  rho.require_hermitian(tol);
  if (std::abs(rho.trace_real() - 1.0) > std::max(tol, 1e-8)) throw ValidationError("state must have unit trace");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(rho.matrix(), Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -tol) throw ValidationError("state must be positive semidefinite");
}

double sum_negativity(const Operator& rho) {
  require_state(rho);
  const RealMatrix w = wigner_of_state(rho).values();
  return -w.cwiseMin(0.0).sum();
}

double mana_state(const Operator& rho) {
  require_state(rho);
  return mana_of_table(wigner_of_state(rho));
}

double mana_of_table(const WignerTable& table) { return std::log2(table.row_norms().maxCoeff()); }

MeasureReport mana_channel(const Channel& channel, bool require_tp) {
  if (require_tp && !channel.is_trace_preserving(1e-8)) throw ValidationError("channel is not trace preserving");
  const WignerTable table = wigner_of_channel(channel);
  const RealVector norms = table.row_norms();
  // first index attaining the maximum, with rows equal up to rounding treated as ties
  const double top = norms.maxCoeff();
  Eigen::Index best = 0;
  while (norms(best) < top - 1e-12 * top) ++best;
  MeasureReport r;
  r.measure = "mana";
  r.exp_value = norms(best);
  r.log2_value = std::log2(norms(best));
  r.argmax_point = point_at(channel.d(), channel.n_in(), static_cast<std::size_t>(best));
  return r;
}

CpwpResult is_cpwp(const WignerTable& table, double tol) {
  Eigen::Index u = 0;
  Eigen::Index v = 0;
  CpwpResult r;
  r.min_entry = table.values().minCoeff(&u, &v);
  r.cpwp = r.min_entry >= -tol;
  r.input = point_at(table.d(), std::max(table.n_in(), 1), static_cast<std::size_t>(u));
  if (table.n_in() == 0) r.input.components.clear();
  r.output = point_at(table.d(), table.n_out(), static_cast<std::size_t>(v));
  return r;
}

CpwpResult is_cpwp(const Channel& channel, double tol) { return is_cpwp(wigner_of_channel(channel), tol); }

MeasureReport max_thauma_state(const Operator& rho, const ThaumaOptions& options) {
  require_state(rho);
  if (rho.n() > options.max_state_qudits && !options.force) {
    throw SizeLimitError("max-thauma of states is limited to " + std::to_string(options.max_state_qudits) +
                         " qudits (use force to override)");
  }
  const int d = rho.d();
  const int n = rho.n();
  const auto dim = static_cast<int>(rho.dim());
  const RealMatrix w = wigner_of_state(rho).values();
  const auto ops = point_operators(d, n);
  const auto count = static_cast<int>(ops.size());

  // V = rho + S, S >= 0; |W_V(u)| split as p_u + q_u
  conic::Problem p;
  const int s_block = p.add_psd(dim);
  const int split = p.add_nonneg(2 * count);
  for (int u = 0; u < count; ++u) {
    const int row = p.add_row(-w(0, u));
    p.add_psd_coeff(row, s_block, ops[static_cast<std::size_t>(u)] / static_cast<double>(dim));
    p.set_nonneg_coeff(row, split + 2 * u, -1.0);
    p.set_nonneg_coeff(row, split + 2 * u + 1, 1.0);
    p.set_nonneg_cost(split + 2 * u, 1.0);
    p.set_nonneg_cost(split + 2 * u + 1, 1.0);
  }
  const auto sol = conic::solve(p, options.solver);
  check_solution(sol, "max-thauma (state)");

  MeasureReport r;
  r.measure = "thauma";
  r.exp_value = sol.primal_value;
  r.log2_value = std::log2(sol.primal_value);
  r.solver_status = conic::to_string(sol.status);
  r.gap = sol.gap;
  r.certificate = rho.matrix() + sol.X[0];
  return r;
}

namespace {

struct ThaumaChannelSolve {
  conic::Solution sol;
  Matrix choi;
};

ThaumaChannelSolve solve_thauma_channel(const Channel& channel, const ThaumaOptions& options) {
  if (channel.n_in() + channel.n_out() > options.max_channel_qudits && !options.force) {
    throw SizeLimitError("max-thauma of channels is limited to n_in + n_out <= " +
                         std::to_string(options.max_channel_qudits) + " qudits (use force to override)");
  }
  const int d = channel.d();
  const auto in_ops = point_operators(d, channel.n_in());
  const auto out_ops = point_operators(d, channel.n_out());
  const auto rows_u = static_cast<int>(in_ops.size());
  const auto cols_v = static_cast<int>(out_ops.size());
  const auto dim = static_cast<int>(channel.dim_in() * channel.dim_out());
  const double scale = 1.0 / static_cast<double>(channel.dim_out());
  const WignerTable table = wigner_of_channel(channel);

  // Y = J + S with S >= 0; |W_Y(v|u)| split as p_uv + q_uv; row sums plus slack equal t
  conic::Problem p;
  const int s_block = p.add_psd(dim);
  const int split = p.add_nonneg(2 * rows_u * cols_v);
  const int slack = p.add_nonneg(rows_u);
  const int t = p.add_nonneg(1);
  p.set_nonneg_cost(t, 1.0);
  for (int u = 0; u < rows_u; ++u) {
    const Matrix in_t = in_ops[static_cast<std::size_t>(u)].transpose();
    for (int v = 0; v < cols_v; ++v) {
      const int k = u * cols_v + v;
      const int row = p.add_row(-table(u, v));
      p.add_psd_coeff(row, s_block, scale * kron(in_t, out_ops[static_cast<std::size_t>(v)]));
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
  ThaumaChannelSolve out{conic::solve(p, options.solver), channel.choi()};
  check_solution(out.sol, "max-thauma (channel)");
  return out;
}

}  // namespace

MeasureReport max_thauma_channel(const Channel& channel, const ThaumaOptions& options) {
  const auto res = solve_thauma_channel(channel, options);
  MeasureReport r;
  r.measure = "thauma";
  r.exp_value = res.sol.primal_value;
  r.log2_value = std::log2(res.sol.primal_value);
  r.solver_status = conic::to_string(res.sol.status);
  r.gap = res.sol.gap;
  r.certificate = res.choi + res.sol.X[0];
  return r;
}

MeasureReport max_thauma_channel_dual(const Channel& channel, const ThaumaOptions& options) {
  const auto res = solve_thauma_channel(channel, options);
  MeasureReport r;
  r.measure = "thauma-dual";
  r.exp_value = res.sol.dual_value;
  r.log2_value = std::log2(res.sol.dual_value);
  r.solver_status = conic::to_string(res.sol.status);
  r.gap = res.sol.gap;
  r.certificate = res.sol.S[0];
  return r;
}

MeasureReport robustness_wplus(const Operator& rho, const conic::Settings& settings) {
  require_state(rho);
  const int d = rho.d();
  const int n = rho.n();
  const auto dim = static_cast<int>(rho.dim());
  const auto ops = point_operators(d, n);
  const auto count = static_cast<int>(ops.size());

  // sigma' = (1 + p) sigma, omega' = p omega; sigma' - omega' = rho
  conic::Problem p;
  const int sigma = p.add_psd(dim);
  const int omega = p.add_psd(dim);
  const int w_sigma = p.add_nonneg(count);
  const int w_omega = p.add_nonneg(count);
  p.set_psd_cost(sigma, Matrix::Identity(dim, dim));
  p.set_psd_cost(omega, Matrix::Identity(dim, dim));
  add_matrix_equality(p, rho.matrix(), [&](int row, const Matrix& e) {
    p.add_psd_coeff(row, sigma, e);
    p.add_psd_coeff(row, omega, -e);
  });
  for (int u = 0; u < count; ++u) {
    const Matrix a = ops[static_cast<std::size_t>(u)] / static_cast<double>(dim);
    const int rs = p.add_row(0.0);
    p.add_psd_coeff(rs, sigma, a);
    p.set_nonneg_coeff(rs, w_sigma + u, -1.0);
    const int ro = p.add_row(0.0);
    p.add_psd_coeff(ro, omega, a);
    p.set_nonneg_coeff(ro, w_omega + u, -1.0);
  }
  const auto sol = conic::solve(p, settings);
  check_solution(sol, "robustness (Wigner polytope)");

  MeasureReport r;
  r.measure = "rob-wplus";
  r.exp_value = sol.primal_value;
  r.log2_value = std::log2(sol.primal_value);
  r.solver_status = conic::to_string(sol.status);
  r.gap = sol.gap;
  const double p_val = (sol.primal_value - 1.0) / 2.0;
  r.certificate = sol.X[0] / (1.0 + p_val);
  r.certificate2 = p_val > 1e-12 ? Matrix(sol.X[1] / p_val) : Matrix(Matrix::Zero(dim, dim));
  return r;
}

MeasureReport robustness_stab(const Operator& rho, const conic::Settings& settings) {
  require_state(rho);
  if (rho.dim() > 9) throw SizeLimitError("stabilizer robustness is limited to d^n <= 9");
  const auto stabs = stabilizer_states(rho.d(), rho.n());
  const auto count = static_cast<int>(stabs.size());

  conic::Problem p;
  const int split = p.add_nonneg(2 * count);
  for (int k = 0; k < 2 * count; ++k) p.set_nonneg_cost(split + k, 1.0);
  add_matrix_equality(p, rho.matrix(), [&](int row, const Matrix& e) {
    for (int i = 0; i < count; ++i) {
      const double c = (e.conjugate().cwiseProduct(stabs[static_cast<std::size_t>(i)])).sum().real();
      p.set_nonneg_coeff(row, split + 2 * i, c);
      p.set_nonneg_coeff(row, split + 2 * i + 1, -c);
    }
  });
  const auto sol = conic::solve(p, settings);
  check_solution(sol, "robustness (stabilizer)");

  MeasureReport r;
  r.measure = "rob-stab";
  r.exp_value = sol.primal_value;
  r.log2_value = std::log2(sol.primal_value);
  r.solver_status = conic::to_string(sol.status);
  r.gap = sol.gap;
  r.weights.resize(count);
  for (int i = 0; i < count; ++i) r.weights(i) = sol.x(split + 2 * i) - sol.x(split + 2 * i + 1);
  return r;
}

AmortizedResult amortized_lower_bound(const Channel& channel, const std::vector<Operator>& inputs) {
  if (inputs.empty()) throw ValidationError("amortized bound needs at least one input state");
  AmortizedResult r;
  r.channel_mana = mana_channel(channel, false).log2_value;
  r.gain = -std::numeric_limits<double>::infinity();
  const auto kraus = channel.kraus_operators();
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    const Operator& rho = inputs[k];
    require_state(rho);
    if (rho.d() != channel.d() || rho.n() < channel.n_in()) throw DimensionError("input does not fit the channel");
    const int n_ref = rho.n() - channel.n_in();
    const auto dim_ref = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(rho.d()), n_ref));
    const Matrix id_ref = Matrix::Identity(dim_ref, dim_ref);
    Matrix out = Matrix::Zero(dim_ref * channel.dim_out(), dim_ref * channel.dim_out());
    for (const auto& op : kraus) {
      const Matrix full = kron(id_ref, op);
      out += full * rho.matrix() * full.adjoint();
    }
    const Operator output(rho.d(), n_ref + channel.n_out(), (out + out.adjoint()) / 2.0);
    const double gain = mana_of_table(wigner_of_state(output)) - mana_state(rho);
    if (gain > r.gain) {
      r.gain = gain;
      r.best_input = k;
    }
  }
  if (r.gain > r.channel_mana + 1e-8) throw Error("amortized mana gain exceeds the channel mana");
  return r;
}

double t_state_thauma() { return std::log2(1.0 + 2.0 * std::sin(std::numbers::pi / 18.0)); }

double distillable_t_bound(const Channel& channel, const ThaumaOptions& options) {
  return max_thauma_channel(channel, options).log2_value / t_state_thauma();
}

InjectableBounds injectable_bounds(const Channel& channel, const Operator& resource, const ThaumaOptions& options,
                                   double tol) {
  InjectableBounds b;
  b.mana_resource = mana_state(resource);
  b.thauma_resource = max_thauma_state(resource, options).log2_value;
  b.mana_channel = mana_channel(channel).log2_value;
  b.thauma_channel = max_thauma_channel(channel, options).log2_value;
  b.holds = b.mana_channel <= b.mana_resource + tol && b.thauma_channel <= b.thauma_resource + tol;
  return b;
}

}  // namespace magiclab
