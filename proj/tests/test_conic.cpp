#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "magiclab/channels.hpp"
#include "magiclab/conic.hpp"
#include "magiclab/measures.hpp"
#include "magiclab/random.hpp"

namespace {

using namespace magiclab;
using conic::Problem;
using conic::Status;

Problem two_lower_bounds() {
  // min t  s.t. t - s1 = 5, t - s2 = 3
  Problem p;
  const int t = p.add_nonneg(3);
  const int r1 = p.add_row(5.0);
  const int r2 = p.add_row(3.0);
  p.set_nonneg_coeff(r1, t, 1.0);
  p.set_nonneg_coeff(r1, t + 1, -1.0);
  p.set_nonneg_coeff(r2, t, 1.0);
  p.set_nonneg_coeff(r2, t + 2, -1.0);
  p.set_nonneg_cost(t, 1.0);
  return p;
}

TEST(Conic, MaxOfLowerBounds) {
  const auto sol = conic::solve(two_lower_bounds());
  ASSERT_EQ(sol.status, Status::Optimal);
  EXPECT_NEAR(sol.primal_value, 5.0, 1e-6);
  EXPECT_NEAR(sol.dual_value, 5.0, 1e-6);
  EXPECT_NEAR(sol.x(0), 5.0, 1e-6);
}

Problem trace_above(const Matrix& m) {
  // min tr X  s.t. X - S = M, X, S PSD
  Problem p;
  const auto n = static_cast<int>(m.rows());
  const int x = p.add_psd(n);
  const int s = p.add_psd(n);
  for (const auto& e : conic::hermitian_basis(n)) {
    const int r = p.add_row((e * m).trace().real());
    p.add_psd_coeff(r, x, e);
    p.add_psd_coeff(r, s, -e);
  }
  p.set_psd_cost(x, Matrix::Identity(n, n));
  return p;
}

TEST(Conic, TraceOfDominatingMatrix) {
  Rng rng(1);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix g = random_ginibre(4, 2, rng);
    const Matrix m = g * g.adjoint();
    const auto sol = conic::solve(trace_above(m));
    ASSERT_EQ(sol.status, Status::Optimal);
    EXPECT_NEAR(sol.primal_value, m.trace().real(), 1e-6);
    EXPECT_LT((sol.X[0] - m).norm(), 1e-3);
  }
}

TEST(Conic, RealEmbeddingAgreesWithNativeHermitian) {
  Rng rng(2);
  const Matrix g = random_ginibre(3, 3, rng);
  const Matrix m = g * g.adjoint();
  conic::Settings embedded;
  embedded.real_embedding = true;
  const auto a = conic::solve(trace_above(m));
  const auto b = conic::solve(trace_above(m), embedded);
  ASSERT_TRUE(a.optimal());
  ASSERT_TRUE(b.optimal());
  EXPECT_NEAR(a.primal_value, b.primal_value, 1e-6);
  EXPECT_LT((a.X[0] - b.X[0]).norm(), 1e-3);
}

TEST(Conic, IdentityChannelThaumaIsZero) {
  const auto r = max_thauma_channel(identity_channel(3));
  EXPECT_NEAR(r.log2_value, 0.0, 1e-6);
  EXPECT_EQ(r.solver_status, "optimal");
}

TEST(Conic, DetectsInfeasible) {
  Problem p;
  const int x = p.add_nonneg(1);
  const int r = p.add_row(-1.0);
  p.set_nonneg_coeff(r, x, 1.0);
  EXPECT_EQ(conic::solve(p).status, Status::Infeasible);
}

TEST(Conic, DetectsInfeasiblePsd) {
  // tr X = -1 with X PSD
  Problem p;
  const int x = p.add_psd(2);
  const int r = p.add_row(-1.0);
  p.add_psd_coeff(r, x, Matrix::Identity(2, 2));
  EXPECT_EQ(conic::solve(p).status, Status::Infeasible);
}

TEST(Conic, DetectsUnbounded) {
  // min -x s.t. x - y = 0
  Problem p;
  const int x = p.add_nonneg(2);
  const int r = p.add_row(0.0);
  p.set_nonneg_coeff(r, x, 1.0);
  p.set_nonneg_coeff(r, x + 1, -1.0);
  p.set_nonneg_cost(x, -1.0);
  EXPECT_EQ(conic::solve(p).status, Status::Unbounded);
}

TEST(Conic, IterationLimitGivesInaccurate) {
  Rng rng(3);
  const Matrix g = random_ginibre(4, 4, rng);
  conic::Settings s;
  s.max_iterations = 2;
  const auto sol = conic::solve(trace_above(g * g.adjoint()), s);
  EXPECT_EQ(sol.status, Status::Inaccurate);
  EXPECT_GT(sol.primal_residual + sol.dual_residual + sol.relative_gap, 0.0);
}

TEST(Conic, SizeLimits) {
  Problem p;
  p.add_psd(8);
  p.add_row(1.0);
  conic::Settings s;
  s.max_block = 4;
  EXPECT_THROW(conic::solve(p, s), SizeLimitError);
  s.max_block = 200;
  s.max_rows = 0;
  EXPECT_THROW(conic::solve(p, s), SizeLimitError);
}

// Random LP  min c^T x  s.t.  A x >= b, x >= 0, made feasible and bounded by
// b = A x0 - w0 and c = A^T y0 + s0 with x0, w0, y0, s0 > 0.
struct RandomLp {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

RandomLp random_lp(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> size_dist(2, 6);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> pos(0.1, 2.0);
  const int m = size_dist(rng);
  const int n = size_dist(rng);
  RandomLp lp{Eigen::MatrixXd(m, n), Eigen::VectorXd(m), Eigen::VectorXd(n)};
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) lp.a(i, j) = normal(rng);
  Eigen::VectorXd x0(n), s0(n), y0(m), w0(m);
  for (int j = 0; j < n; ++j) {
    x0(j) = pos(rng);
    s0(j) = pos(rng);
  }
  for (int i = 0; i < m; ++i) {
    y0(i) = pos(rng);
    w0(i) = pos(rng);
  }
  lp.b = lp.a * x0 - w0;
  lp.c = lp.a.transpose() * y0 + s0;
  return lp;
}

// Standard form with surplus variables: A x - w = b.
Problem primal_of(const RandomLp& lp) {
  Problem p;
  const auto m = static_cast<int>(lp.b.size());
  const auto n = static_cast<int>(lp.c.size());
  const int x = p.add_nonneg(n);
  const int w = p.add_nonneg(m);
  for (int i = 0; i < m; ++i) {
    const int r = p.add_row(lp.b(i));
    for (int j = 0; j < n; ++j) p.set_nonneg_coeff(r, x + j, lp.a(i, j));
    p.set_nonneg_coeff(r, w + i, -1.0);
  }
  for (int j = 0; j < n; ++j) p.set_nonneg_cost(x + j, lp.c(j));
  return p;
}

// max b^T y s.t. A^T y <= c, y >= 0, written as min -b^T y s.t. A^T y + z = c.
Problem hand_dual_of(const RandomLp& lp) {
  Problem p;
  const auto m = static_cast<int>(lp.b.size());
  const auto n = static_cast<int>(lp.c.size());
  const int y = p.add_nonneg(m);
  const int z = p.add_nonneg(n);
  for (int j = 0; j < n; ++j) {
    const int r = p.add_row(lp.c(j));
    for (int i = 0; i < m; ++i) p.set_nonneg_coeff(r, y + i, lp.a(i, j));
    p.set_nonneg_coeff(r, z + j, 1.0);
  }
  for (int i = 0; i < m; ++i) p.set_nonneg_cost(y + i, -lp.b(i));
  return p;
}

TEST(ConicProperty, HandBuiltDualMatchesReportedDual) {
  std::mt19937_64 rng(2024);
  const double tol = 1e-7;
  for (int instance = 0; instance < 120; ++instance) {
    const RandomLp lp = random_lp(rng);
    const auto primal = conic::solve(primal_of(lp));
    const auto dual = conic::solve(hand_dual_of(lp));
    ASSERT_TRUE(primal.optimal()) << instance;
    ASSERT_TRUE(dual.optimal()) << instance;
    const double scale = 1.0 + std::abs(primal.dual_value);
    EXPECT_LE(std::abs(primal.dual_value + dual.primal_value) / scale, tol * 10) << instance;
    EXPECT_LE(primal.primal_residual, tol);
    EXPECT_LE(primal.dual_residual, tol);
    EXPECT_LE(primal.relative_gap, tol);
    EXPECT_LE(primal.complementarity / (1.0 + std::abs(primal.primal_value) + std::abs(primal.dual_value)),
              10 * tol);
    // the reported multipliers are dual feasible
    const Eigen::VectorXd slack = lp.c - lp.a.transpose() * primal.y;
    EXPECT_GE(slack.minCoeff(), -1e-6) << instance;
    EXPECT_GE(primal.y.minCoeff(), -1e-6) << instance;
  }
}

// A split free variable has an unbounded optimal face; the solver must stop
// with its best iterate instead of diverging.
TEST(Conic, FreeVariableSplitDoesNotDiverge) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int instance = 0; instance < 40; ++instance) {
    // max b^T y s.t. A^T y <= c with y free
    const int m = 3, n = 6;
    Eigen::MatrixXd a(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    Eigen::VectorXd y0(m), b(m);
    for (int i = 0; i < m; ++i) y0(i) = normal(rng);
    Eigen::VectorXd c = a.transpose() * y0 + Eigen::VectorXd::Constant(n, 0.5);
    b = a * Eigen::VectorXd::Constant(n, 1.0);
    Problem p;
    const int yp = p.add_nonneg(m);
    const int ym = p.add_nonneg(m);
    const int z = p.add_nonneg(n);
    for (int j = 0; j < n; ++j) {
      const int r = p.add_row(c(j));
      for (int i = 0; i < m; ++i) {
        p.set_nonneg_coeff(r, yp + i, a(i, j));
        p.set_nonneg_coeff(r, ym + i, -a(i, j));
      }
      p.set_nonneg_coeff(r, z + j, 1.0);
    }
    for (int i = 0; i < m; ++i) {
      p.set_nonneg_cost(yp + i, -b(i));
      p.set_nonneg_cost(ym + i, b(i));
    }
    const auto sol = conic::solve(p);
    EXPECT_TRUE(std::isfinite(sol.primal_value));
    EXPECT_LE(std::max(sol.primal_residual, sol.dual_residual), 1e-5) << instance;
    EXPECT_LE(sol.relative_gap, 1e-5) << instance;
  }
}

TEST(ConicProperty, RandomSdpOptimalityConditions) {
  Rng rng(77);
  for (int instance = 0; instance < 100; ++instance) {
    const Matrix g = random_ginibre(3, 1 + instance % 3, rng);
    const auto sol = conic::solve(trace_above(g * g.adjoint()));
    ASSERT_TRUE(sol.optimal()) << instance;
    EXPECT_LE(sol.primal_residual, 1e-7);
    EXPECT_LE(sol.dual_residual, 1e-7);
    EXPECT_LE(sol.relative_gap, 1e-7);
    EXPECT_LE(sol.complementarity / (1.0 + std::abs(sol.primal_value) + std::abs(sol.dual_value)), 1e-6);
  }
}

TEST(Conic, ReentrantAcrossThreads) {
  std::mt19937_64 rng(5);
  std::vector<RandomLp> lps;
  for (int k = 0; k < 8; ++k) lps.push_back(random_lp(rng));
  std::vector<double> serial;
  for (const auto& lp : lps) serial.push_back(conic::solve(primal_of(lp)).primal_value);
  std::vector<double> parallel(lps.size());
  std::vector<std::thread> pool;
  for (std::size_t k = 0; k < lps.size(); ++k) {
    pool.emplace_back([&, k] { parallel[k] = conic::solve(primal_of(lps[k])).primal_value; });
  }
  for (auto& t : pool) t.join();
  for (std::size_t k = 0; k < lps.size(); ++k) EXPECT_EQ(serial[k], parallel[k]);
}

TEST(Embedding, RoundTripIsExact) {
  Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix h = random_hermitian(1 + trial % 5, rng);
    const RealMatrix e = conic::hermitian_embedding(h);
    EXPECT_EQ(e.rows(), 2 * h.rows());
    EXPECT_LT((e - e.transpose()).norm(), 1e-15);
    EXPECT_EQ((conic::hermitian_from_embedding(e) - h).norm(), 0.0);
  }
}

TEST(Embedding, PreservesSpectrumAndInnerProduct) {
  Rng rng(7);
  const Matrix a = random_hermitian(4, rng);
  const Matrix b = random_hermitian(4, rng);
  const RealMatrix ea = conic::hermitian_embedding(a);
  const RealMatrix eb = conic::hermitian_embedding(b);
  EXPECT_NEAR((ea.transpose() * eb).trace(), 2.0 * (a * b).trace().real(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix> ha(a);
  Eigen::SelfAdjointEigenSolver<RealMatrix> he(ea);
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(he.eigenvalues()(2 * k), ha.eigenvalues()(k), 1e-12);
    EXPECT_NEAR(he.eigenvalues()(2 * k + 1), ha.eigenvalues()(k), 1e-12);
  }
}

TEST(Embedding, HermitianBasisIsOrthogonal) {
  const auto basis = conic::hermitian_basis(4);
  ASSERT_EQ(basis.size(), 16u);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    EXPECT_LT((basis[i] - basis[i].adjoint()).norm(), 1e-15);
    for (std::size_t j = 0; j < i; ++j) EXPECT_NEAR((basis[i] * basis[j]).trace().real(), 0.0, 1e-15);
  }
}

TEST(Conic, DumpJsonLayout) {
  const auto path = (std::filesystem::temp_directory_path() / "magiclab_conic_dump.json").string();
  conic::Settings s;
  s.dump_path = path;
  conic::solve(two_lower_bounds(), s);
  std::ifstream f(path);
  const auto j = nlohmann::json::parse(f);
  EXPECT_EQ(j.at("schema"), 1);
  EXPECT_EQ(j.at("n_lp"), 3);
  EXPECT_EQ(j.at("b").size(), 2u);
  EXPECT_EQ(j.at("a_lp").size(), 4u);
  std::remove(path.c_str());
}

}  // namespace
