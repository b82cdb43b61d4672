#include "magiclab/conic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

namespace magiclab::conic {

int Problem::add_nonneg(int count) {
  if (count < 0) throw DimensionError("negative variable count");
  const int first = n_lp_;
  n_lp_ += count;
  lp_cost_.resize(static_cast<std::size_t>(n_lp_), 0.0);
  return first;
}

int Problem::add_psd(int size) {
  if (size < 1) throw DimensionError("PSD block must have positive size");
  block_sizes_.push_back(size);
  psd_cost_.push_back(Matrix::Zero(size, size));
  return static_cast<int>(block_sizes_.size()) - 1;
}

int Problem::add_row(double rhs) {
  rhs_.push_back(rhs);
  return static_cast<int>(rhs_.size()) - 1;
}

void Problem::set_nonneg_coeff(int row, int var, double value) {
  if (row < 0 || row >= rows() || var < 0 || var >= n_lp_) throw DimensionError("coefficient index out of range");
  if (value != 0.0) lp_entries_.push_back({row, var, value});
}

void Problem::add_psd_coeff(int row, int block, const Matrix& coeff) {
  if (row < 0 || row >= rows() || block < 0 || block >= static_cast<int>(block_sizes_.size())) {
    throw DimensionError("coefficient index out of range");
  }
  const int size = block_sizes_[static_cast<std::size_t>(block)];
  if (coeff.rows() != size || coeff.cols() != size) throw DimensionError("coefficient block shape mismatch");
  if ((coeff - coeff.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + coeff.cwiseAbs().maxCoeff())) {
    throw ValidationError("PSD coefficient must be Hermitian");
  }
  psd_entries_.push_back({row, block, (coeff + coeff.adjoint()) / 2.0});
}

void Problem::set_nonneg_cost(int var, double value) {
  if (var < 0 || var >= n_lp_) throw DimensionError("cost index out of range");
  lp_cost_[static_cast<std::size_t>(var)] = value;
}

void Problem::set_psd_cost(int block, const Matrix& cost) {
  if (block < 0 || block >= static_cast<int>(block_sizes_.size())) throw DimensionError("cost block out of range");
  const int size = block_sizes_[static_cast<std::size_t>(block)];
  if (cost.rows() != size || cost.cols() != size) throw DimensionError("cost block shape mismatch");
  psd_cost_[static_cast<std::size_t>(block)] = (cost + cost.adjoint()) / 2.0;
}

void Problem::set_rhs(int row, double rhs) {
  if (row < 0 || row >= rows()) throw DimensionError("row out of range");
  rhs_[static_cast<std::size_t>(row)] = rhs;
}

std::string to_string(Status status) {
  switch (status) {
    case Status::Optimal:
      return "optimal";
    case Status::Infeasible:
      return "infeasible";
    case Status::Unbounded:
      return "unbounded";
    case Status::Inaccurate:
      return "inaccurate";
  }
  return "unknown";
}

RealMatrix hermitian_embedding(const Matrix& h) {
  const auto n = h.rows();
  RealMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = h.real();
  out.topRightCorner(n, n) = -h.imag();
  out.bottomLeftCorner(n, n) = h.imag();
  out.bottomRightCorner(n, n) = h.real();
  return out;
}

Matrix hermitian_from_embedding(const RealMatrix& y) {
  if (y.rows() != y.cols() || y.rows() % 2 != 0) throw DimensionError("embedding must be square of even size");
  const auto n = y.rows() / 2;
  Matrix out(n, n);
  out.real() = (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n)) / 2.0;
  out.imag() = (y.bottomLeftCorner(n, n) - y.topRightCorner(n, n)) / 2.0;
  return out;
}

std::vector<Matrix> hermitian_basis(Eigen::Index dim) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(dim * dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    Matrix e = Matrix::Zero(dim, dim);
    e(i, i) = 1.0;
    basis.push_back(std::move(e));
  }
  const Complex im(0.0, 1.0);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      Matrix re = Matrix::Zero(dim, dim);
      re(i, j) = 1.0;
      re(j, i) = 1.0;
      basis.push_back(std::move(re));
      Matrix ie = Matrix::Zero(dim, dim);
      ie(i, j) = im;
      ie(j, i) = -im;
      basis.push_back(std::move(ie));
    }
  }
  return basis;
}

Problem real_embedding(const Problem& problem) {
  Problem out;
  out.add_nonneg(problem.nonneg_count());
  for (int size : problem.block_sizes()) out.add_psd(2 * size);
  for (double r : problem.rhs()) out.add_row(r);
  for (const auto& e : problem.lp_entries()) out.set_nonneg_coeff(e.row, e.var, e.value);
  for (const auto& e : problem.psd_entries()) {
    out.add_psd_coeff(e.row, e.block, Matrix(hermitian_embedding(e.coeff).cast<Complex>() / 2.0));
  }
  for (int k = 0; k < problem.nonneg_count(); ++k) out.set_nonneg_cost(k, problem.lp_cost()[static_cast<std::size_t>(k)]);
  for (std::size_t b = 0; b < problem.block_sizes().size(); ++b) {
    out.set_psd_cost(static_cast<int>(b), Matrix(hermitian_embedding(problem.psd_cost()[b]).cast<Complex>() / 2.0));
  }
  return out;
}

namespace {

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json rr = nlohmann::json::array();
    nlohmann::json ii = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ii.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ii));
  }
  return {{"re", std::move(re)}, {"im", std::move(im)}};
}

}  // namespace

void dump_json(const Problem& problem, const std::string& path) {
  nlohmann::json j;
  j["schema"] = 1;
  j["form"] = "min <c,x> s.t. A(x) = b, x in R+^n_lp x PSD blocks";
  j["n_lp"] = problem.nonneg_count();
  j["blocks"] = problem.block_sizes();
  j["b"] = problem.rhs();
  j["c_lp"] = problem.lp_cost();
  j["c_blocks"] = nlohmann::json::array();
  for (const auto& c : problem.psd_cost()) j["c_blocks"].push_back(matrix_json(c));
  j["a_lp"] = nlohmann::json::array();
  for (const auto& e : problem.lp_entries()) j["a_lp"].push_back({e.row, e.var, e.value});
  j["a_blocks"] = nlohmann::json::array();
  for (const auto& e : problem.psd_entries()) {
    j["a_blocks"].push_back({{"row", e.row}, {"block", e.block}, {"coeff", matrix_json(e.coeff)}});
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << j.dump(1) << '\n';
}

namespace {

// Assembled data. Block coefficients are stored column-wise: column i of
// vecs[b] is vec(A_i) restricted to block b; `active[b]` lists rows that
// touch block b.
struct Data {
  int m = 0;
  int n_lp = 0;
  std::vector<int> sizes;
  RealMatrix a_lp;  // m x n_lp
  std::vector<Matrix> vecs;
  std::vector<std::vector<int>> active;
  RealVector b;
  RealVector c_lp;
  std::vector<Matrix> c;
  double nu = 0.0;
};

Data assemble(const Problem& p) {
  Data d;
  d.m = p.rows();
  d.n_lp = p.nonneg_count();
  d.sizes = p.block_sizes();
  d.a_lp = RealMatrix::Zero(d.m, d.n_lp);
  for (const auto& e : p.lp_entries()) d.a_lp(e.row, e.var) += e.value;
  const auto nb = d.sizes.size();
  d.vecs.resize(nb);
  d.active.resize(nb);
  std::vector<std::vector<bool>> touched(nb, std::vector<bool>(static_cast<std::size_t>(d.m), false));
  for (std::size_t k = 0; k < nb; ++k) {
    const auto s = static_cast<Eigen::Index>(d.sizes[k]);
    d.vecs[k] = Matrix::Zero(s * s, d.m);
  }
  for (const auto& e : p.psd_entries()) {
    const auto k = static_cast<std::size_t>(e.block);
    const auto s = static_cast<Eigen::Index>(d.sizes[k]);
    d.vecs[k].col(e.row) += Eigen::Map<const Vector>(e.coeff.data(), s * s);
    touched[k][static_cast<std::size_t>(e.row)] = true;
  }
  for (std::size_t k = 0; k < nb; ++k) {
    for (int r = 0; r < d.m; ++r) {
      if (touched[k][static_cast<std::size_t>(r)]) d.active[k].push_back(r);
    }
  }
  d.b = Eigen::Map<const RealVector>(p.rhs().data(), d.m);
  d.c_lp = Eigen::Map<const RealVector>(p.lp_cost().data(), d.n_lp);
  d.c = p.psd_cost();
  d.nu = d.n_lp;
  for (int s : d.sizes) d.nu += s;
  return d;
}

RealVector apply_a(const Data& d, const RealVector& x, const std::vector<Matrix>& xs) {
  RealVector out = d.a_lp * x;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const auto len = xs[k].size();
    out += (d.vecs[k].adjoint() * Eigen::Map<const Vector>(xs[k].data(), len)).real();
  }
  return out;
}

void apply_adjoint(const Data& d, const RealVector& y, RealVector& lp, std::vector<Matrix>& blocks) {
  lp = d.a_lp.transpose() * y;
  blocks.resize(d.sizes.size());
  const Vector yc = y.cast<Complex>();
  for (std::size_t k = 0; k < d.sizes.size(); ++k) {
    const auto s = static_cast<Eigen::Index>(d.sizes[k]);
    const Vector v = d.vecs[k] * yc;
    blocks[k] = Eigen::Map<const Matrix>(v.data(), s, s);
  }
}

double inner(const Matrix& a, const Matrix& b) {
  // Re tr[A B] for Hermitian A
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) / 2.0; }

// Largest alpha with x + alpha dx >= 0 (infinity if unbounded).
double max_step_lp(const RealVector& x, const RealVector& dx) {
  double alpha = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (dx(i) < 0) alpha = std::min(alpha, -x(i) / dx(i));
  }
  return alpha;
}

double max_step_psd(const Eigen::LLT<Matrix>& chol, const Matrix& dx) {
  const auto& l = chol.matrixL();
  Matrix w = l.solve(dx);
  w = l.solve(w.adjoint().eval()).adjoint();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(w), Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  return lmin < 0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

double psd_distance(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(m), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseMin(0.0).norm();
}

struct Iterate {
  RealVector x, s, y;
  std::vector<Matrix> xs, ss;
};

struct Direction {
  RealVector dx, ds, dy;
  std::vector<Matrix> dxs, dss;
};

class Solver {
 public:
  Solver(const Data& data, const Settings& settings) : d_(data), set_(settings) {}

  Solution run();

 private:
  void initial_point();
  void residuals();
  bool factor();
  Direction direction(const RealVector& rc_lp, const std::vector<Matrix>& rc_blocks);
  double step_primal(const Direction& dir) const;
  double step_dual(const Direction& dir) const;
  Status certificate() const;
  Solution package(Status status, int iterations) const;

  const Data& d_;
  Settings set_;
  Iterate it_;
  RealVector rp_, rd_lp_;
  std::vector<Matrix> rd_;
  std::vector<Matrix> sinv_;
  std::vector<Eigen::LLT<Matrix>> chol_x_, chol_s_;
  Eigen::LDLT<RealMatrix> schur_;
  RealMatrix schur_matrix_;
  double mu_ = 0.0;
  double pobj_ = 0.0, dobj_ = 0.0;
  double rel_p_ = 0.0, rel_d_ = 0.0, rel_gap_ = 0.0;
};

void Solver::initial_point() {
  double a_norm = 1.0;
  for (int i = 0; i < d_.m; ++i) {
    double row = d_.a_lp.row(i).squaredNorm();
    for (const auto& v : d_.vecs) row += v.col(i).squaredNorm();
    a_norm = std::max(a_norm, std::sqrt(row));
  }
  double c_norm = d_.c_lp.size() ? d_.c_lp.norm() : 0.0;
  for (const auto& c : d_.c) c_norm = std::max(c_norm, c.norm());
  double xi = 10.0;
  double eta = std::max({10.0, std::sqrt(d_.nu), c_norm, a_norm});
  for (int i = 0; i < d_.m; ++i) {
    double row = d_.a_lp.row(i).squaredNorm();
    for (const auto& v : d_.vecs) row += v.col(i).squaredNorm();
    xi = std::max(xi, std::sqrt(d_.nu) * (1.0 + std::abs(d_.b(i))) / (1.0 + std::sqrt(row)));
  }
  it_.x = RealVector::Constant(d_.n_lp, xi);
  it_.s = RealVector::Constant(d_.n_lp, eta);
  it_.y = RealVector::Zero(d_.m);
  it_.xs.clear();
  it_.ss.clear();
  for (int s : d_.sizes) {
    it_.xs.push_back(xi * Matrix::Identity(s, s));
    it_.ss.push_back(eta * Matrix::Identity(s, s));
  }
}

void Solver::residuals() {
  rp_ = d_.b - apply_a(d_, it_.x, it_.xs);
  RealVector aty;
  std::vector<Matrix> aty_blocks;
  apply_adjoint(d_, it_.y, aty, aty_blocks);
  rd_lp_ = d_.c_lp - aty - it_.s;
  rd_.resize(d_.sizes.size());
  double rd_sq = rd_lp_.squaredNorm();
  double c_sq = d_.c_lp.squaredNorm();
  double comp = it_.x.dot(it_.s);
  pobj_ = d_.c_lp.dot(it_.x);
  for (std::size_t k = 0; k < d_.sizes.size(); ++k) {
    rd_[k] = d_.c[k] - aty_blocks[k] - it_.ss[k];
    rd_sq += rd_[k].squaredNorm();
    c_sq += d_.c[k].squaredNorm();
    comp += inner(it_.xs[k], it_.ss[k]);
    pobj_ += inner(d_.c[k], it_.xs[k]);
  }
  dobj_ = d_.b.dot(it_.y);
  mu_ = d_.nu > 0 ? comp / d_.nu : 0.0;
  rel_p_ = rp_.norm() / (1.0 + d_.b.norm());
  rel_d_ = std::sqrt(rd_sq) / (1.0 + std::sqrt(c_sq));
  rel_gap_ = std::abs(pobj_ - dobj_) / (1.0 + std::abs(pobj_) + std::abs(dobj_));
}

bool Solver::factor() {
  const auto nb = d_.sizes.size();
  chol_x_.assign(nb, {});
  chol_s_.assign(nb, {});
  sinv_.assign(nb, {});
  RealMatrix schur = d_.a_lp * (it_.x.cwiseQuotient(it_.s)).asDiagonal() * d_.a_lp.transpose();
  for (std::size_t k = 0; k < nb; ++k) {
    chol_x_[k].compute(it_.xs[k]);
    chol_s_[k].compute(it_.ss[k]);
    if (chol_x_[k].info() != Eigen::Success || chol_s_[k].info() != Eigen::Success) return false;
    const auto s = static_cast<Eigen::Index>(d_.sizes[k]);
    sinv_[k] = hermitian_part(chol_s_[k].solve(Matrix::Identity(s, s)));
    const auto& act = d_.active[k];
    if (act.empty()) continue;
    const auto na = static_cast<Eigen::Index>(act.size());
    Matrix a_act(s * s, na);
    Matrix g(s * s, na);
    for (Eigen::Index j = 0; j < na; ++j) {
      a_act.col(j) = d_.vecs[k].col(act[static_cast<std::size_t>(j)]);
      const Eigen::Map<const Matrix> a(a_act.col(j).data(), s, s);
      const Matrix prod = it_.xs[k] * a * sinv_[k];
      g.col(j) = Eigen::Map<const Vector>(prod.data(), s * s);
    }
    const RealMatrix local = (a_act.adjoint() * g).real();
    for (Eigen::Index i = 0; i < na; ++i) {
      for (Eigen::Index j = 0; j < na; ++j) {
        schur(act[static_cast<std::size_t>(i)], act[static_cast<std::size_t>(j)]) += 0.5 * (local(i, j) + local(j, i));
      }
    }
  }
  const double scale = d_.m > 0 ? schur.diagonal().cwiseAbs().maxCoeff() : 1.0;
  schur.diagonal().array() += 1e-14 * (1.0 + scale);
  schur_.compute(schur);
  schur_matrix_ = std::move(schur);
  return schur_.info() == Eigen::Success;
}

Direction Solver::direction(const RealVector& rc_lp, const std::vector<Matrix>& rc_blocks) {
  const auto nb = d_.sizes.size();
  // M dy = rp - A(Rc) + A(X Rd S^-1) - A_lp(rc / s) + A_lp(D rd)
  RealVector rhs = rp_ - d_.a_lp * rc_lp.cwiseQuotient(it_.s) +
                   d_.a_lp * (it_.x.cwiseQuotient(it_.s).cwiseProduct(rd_lp_));
  std::vector<Matrix> tmp(nb);
  for (std::size_t k = 0; k < nb; ++k) tmp[k] = it_.xs[k] * rd_[k] * sinv_[k] - rc_blocks[k];
  rhs += apply_a(d_, RealVector::Zero(d_.n_lp), tmp);

  Direction dir;
  dir.dy = schur_.solve(rhs);
  for (int refine = 0; refine < 2; ++refine) dir.dy += schur_.solve(rhs - schur_matrix_ * dir.dy);
  RealVector aty;
  std::vector<Matrix> aty_blocks;
  apply_adjoint(d_, dir.dy, aty, aty_blocks);
  dir.ds = rd_lp_ - aty;
  dir.dx = rc_lp.cwiseQuotient(it_.s) - it_.x.cwiseQuotient(it_.s).cwiseProduct(dir.ds);
  dir.dss.resize(nb);
  dir.dxs.resize(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    dir.dss[k] = hermitian_part(rd_[k] - aty_blocks[k]);
    dir.dxs[k] = hermitian_part(rc_blocks[k] - it_.xs[k] * dir.dss[k] * sinv_[k]);
  }
  return dir;
}

double Solver::step_primal(const Direction& dir) const {
  double alpha = max_step_lp(it_.x, dir.dx);
  for (std::size_t k = 0; k < dir.dxs.size(); ++k) alpha = std::min(alpha, max_step_psd(chol_x_[k], dir.dxs[k]));
  return alpha;
}

double Solver::step_dual(const Direction& dir) const {
  double alpha = max_step_lp(it_.s, dir.ds);
  for (std::size_t k = 0; k < dir.dss.size(); ++k) alpha = std::min(alpha, max_step_psd(chol_s_[k], dir.dss[k]));
  return alpha;
}

Status Solver::certificate() const {
  constexpr double kInfeasTol = 1e-8;
  const double by = d_.b.dot(it_.y);
  if (by > 0) {
    // y / b^T y with -A^T(y) in K certifies primal infeasibility
    RealVector aty;
    std::vector<Matrix> aty_blocks;
    apply_adjoint(d_, it_.y / by, aty, aty_blocks);
    double dist = (-aty).cwiseMin(0.0).squaredNorm();
    for (const auto& m : aty_blocks) dist += std::pow(psd_distance(-m), 2);
    if (std::sqrt(dist) < kInfeasTol) return Status::Infeasible;
  }
  double cx = d_.c_lp.dot(it_.x);
  for (std::size_t k = 0; k < it_.xs.size(); ++k) cx += inner(d_.c[k], it_.xs[k]);
  if (cx < 0) {
    // x / -<c, x> with A(x) = 0 certifies an unbounded objective
    std::vector<Matrix> scaled = it_.xs;
    for (auto& m : scaled) m /= -cx;
    const RealVector ax = apply_a(d_, it_.x / -cx, scaled);
    if (ax.norm() < kInfeasTol) return Status::Unbounded;
  }
  return Status::Inaccurate;
}

Solution Solver::package(Status status, int iterations) const {
  Solution sol;
  sol.status = status;
  sol.primal_value = pobj_;
  sol.dual_value = dobj_;
  sol.x = it_.x;
  sol.X = it_.xs;
  sol.y = it_.y;
  sol.s = it_.s;
  sol.S = it_.ss;
  sol.primal_residual = rel_p_;
  sol.dual_residual = rel_d_;
  sol.gap = std::abs(pobj_ - dobj_);
  sol.relative_gap = rel_gap_;
  sol.complementarity = mu_ * d_.nu;
  sol.iterations = iterations;
  return sol;
}

Solution Solver::run() {
  constexpr double kStepFraction = 0.98;
  initial_point();
  const auto nb = d_.sizes.size();
  const bool trace = std::getenv("MAGICLAB_CONIC_TRACE") != nullptr;
  Solution best;
  double best_merit = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < set_.max_iterations; ++iter) {
    residuals();
    if (trace) {
      std::fprintf(stderr, "%3d pobj %+.9e dobj %+.9e rp %.2e rd %.2e gap %.2e mu %.2e\n", iter, pobj_, dobj_, rel_p_,
                   rel_d_, rel_gap_, mu_);
    }
    if (rel_p_ <= set_.tol && rel_d_ <= set_.tol && rel_gap_ <= set_.tol) return package(Status::Optimal, iter);
    if (const Status cert = certificate(); cert != Status::Inaccurate) return package(cert, iter);
    // degenerate problems can stall just short of tolerance and then blow up once
    // mu underflows; keep the best iterate and stop when that happens
    const double merit = std::max({rel_p_, rel_d_, rel_gap_});
    if (std::isfinite(merit) && merit < best_merit) {
      best_merit = merit;
      best = package(Status::Inaccurate, iter);
    }
    const double scale = 1.0 + std::abs(pobj_) + std::abs(dobj_);
    if (!std::isfinite(merit) || merit > 1e4 * best_merit || mu_ < 1e-15 * scale) return best;
    if (!factor()) return best;

    // predictor
    RealVector rc_lp = -it_.x.cwiseProduct(it_.s);
    std::vector<Matrix> rc(nb);
    for (std::size_t k = 0; k < nb; ++k) rc[k] = -it_.xs[k];
    const Direction aff = direction(rc_lp, rc);
    const double ap = std::min(1.0, step_primal(aff));
    const double ad = std::min(1.0, step_dual(aff));
    double comp_aff = (it_.x + ap * aff.dx).dot(it_.s + ad * aff.ds);
    for (std::size_t k = 0; k < nb; ++k) comp_aff += inner(it_.xs[k] + ap * aff.dxs[k], it_.ss[k] + ad * aff.dss[k]);
    const double mu_aff = d_.nu > 0 ? comp_aff / d_.nu : 0.0;
    const double sigma = mu_ > 0 ? std::clamp(std::pow(std::max(mu_aff, 0.0) / mu_, 3.0), 0.0, 1.0) : 0.0;

    // corrector
    rc_lp = RealVector::Constant(d_.n_lp, sigma * mu_) - it_.x.cwiseProduct(it_.s) - aff.dx.cwiseProduct(aff.ds);
    for (std::size_t k = 0; k < nb; ++k) {
      rc[k] = sigma * mu_ * sinv_[k] - it_.xs[k] - aff.dxs[k] * aff.dss[k] * sinv_[k];
    }
    const Direction dir = direction(rc_lp, rc);
    const double alpha_p = std::min(1.0, kStepFraction * step_primal(dir));
    const double alpha_d = std::min(1.0, kStepFraction * step_dual(dir));

    it_.x += alpha_p * dir.dx;
    it_.y += alpha_d * dir.dy;
    it_.s += alpha_d * dir.ds;
    for (std::size_t k = 0; k < nb; ++k) {
      it_.xs[k] = hermitian_part(it_.xs[k] + alpha_p * dir.dxs[k]);
      it_.ss[k] = hermitian_part(it_.ss[k] + alpha_d * dir.dss[k]);
    }
  }
  residuals();
  if (rel_p_ <= set_.tol && rel_d_ <= set_.tol && rel_gap_ <= set_.tol) {
    return package(Status::Optimal, set_.max_iterations);
  }
  const Status cert = certificate();
  if (cert != Status::Inaccurate) return package(cert, set_.max_iterations);
  const double merit = std::max({rel_p_, rel_d_, rel_gap_});
  return merit < best_merit ? package(Status::Inaccurate, set_.max_iterations) : best;
}

}  // namespace

Solution solve(const Problem& problem, const Settings& settings) {
  if (problem.rows() > settings.max_rows) {
    throw SizeLimitError("conic problem has " + std::to_string(problem.rows()) + " rows (limit " +
                         std::to_string(settings.max_rows) + ")");
  }
  for (int s : problem.block_sizes()) {
    if (s > settings.max_block) {
      throw SizeLimitError("PSD block of size " + std::to_string(s) + " exceeds limit " +
                           std::to_string(settings.max_block));
    }
  }
  if (!settings.dump_path.empty()) dump_json(problem, settings.dump_path);
  if (settings.real_embedding) {
    Settings inner_settings = settings;
    inner_settings.real_embedding = false;
    inner_settings.dump_path.clear();
    inner_settings.max_block = 2 * settings.max_block;
    Solution sol = solve(real_embedding(problem), inner_settings);
    for (auto& x : sol.X) x = hermitian_from_embedding(x.real());
    for (auto& s : sol.S) s = 2.0 * hermitian_from_embedding(s.real());
    return sol;
  }
  const Data data = assemble(problem);
  Solver solver(data, settings);
  return solver.run();
}

}  // namespace magiclab::conic
