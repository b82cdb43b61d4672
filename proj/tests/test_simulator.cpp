#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "magiclab/channels.hpp"
#include "magiclab/measures.hpp"
#include "magiclab/random.hpp"
#include "magiclab/simulator.hpp"
#include "oracles.hpp"

namespace {

using namespace magiclab;

Circuit t_plus_circuit() {
  Circuit c;
  c.initial = {state_library("+")};
  c.add(t_gate(), {0}, "t");
  return c;
}

double exact_t_plus() {
  // |<0|T|+>|^2 = 1/3 since T is diagonal
  return 1.0 / 3.0;
}

TEST(SampleCount, ClosedFormExamples) {
  EXPECT_EQ(sample_count(1.0, 2.0 / std::exp(2.0), 1.0), 4u);
  EXPECT_EQ(sample_count(0.1, 0.05, 2.0), 4 * sample_count(0.1, 0.05, 1.0));
  const double bound = negativity_profile(t_plus_circuit()).bound;
  EXPECT_EQ(sample_count(0.01, 0.05, bound), oracle::hoeffding(0.01, 0.05, bound));
  EXPECT_EQ(sample_count(0.05, 0.1, bound), oracle::hoeffding(0.05, 0.1, bound));
}

TEST(SampleCount, RejectsBadArguments) {
  EXPECT_THROW(sample_count(0.0, 0.1, 1.0), ValidationError);
  EXPECT_THROW(sample_count(0.1, 1.0, 1.0), ValidationError);
  EXPECT_THROW(estimate(t_plus_circuit(), 0.1, 0.0, 1), ValidationError);
  EXPECT_THROW(estimate(t_plus_circuit(), 1.5, 0.1, 1), ValidationError);
}

TEST(Negativity, ProfileExamples) {
  Circuit clifford;
  clifford.n = 2;
  clifford.add(unitary_channel(3, 1, fourier_matrix(3)), {0});
  clifford.add(unitary_channel(3, 2, csum_matrix(3)), {0, 1});
  clifford.add(unitary_channel(3, 1, phase_gate_matrix(3)), {1});
  EXPECT_NEAR(negativity_profile(clifford).forward, 1.0, 1e-12);
  EXPECT_NEAR(negativity_profile(clifford).state, 1.0, 1e-12);

  const auto w = oracle::channel_table(oracle::unitary_choi(oracle::t_gate()), 3, 1, 1);
  const double row = std::exp2(oracle::log2_max_row_norm(w));
  Circuit chain;
  for (int l = 1; l <= 3; ++l) {
    chain.add(t_gate(), {0});
    EXPECT_NEAR(negativity_profile(chain).forward, std::pow(row, l), 1e-10);
  }
}

TEST(Estimate, ZeroVarianceCircuit) {
  Circuit c;
  const auto r = estimate(c, 0.1, 0.1, 5);
  EXPECT_EQ(r.estimate, 1.0);
  EXPECT_EQ(r.variance, 0.0);
  EXPECT_EQ(r.samples, oracle::hoeffding(0.1, 0.1, 1.0));
}

TEST(Estimate, CoverageOverSeeds) {
  const Circuit c = t_plus_circuit();
  const double exact = exact_born(c);
  EXPECT_NEAR(exact, exact_t_plus(), 1e-12);
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto r = estimate(c, 0.05, 0.1, seed);
    if (std::abs(r.estimate - exact) <= 0.05) ++hits;
    EXPECT_LE(r.max_abs_sample, r.bound * (1.0 + 1e-9));
  }
  EXPECT_GE(hits, 170);
}

TEST(Estimate, UnbiasedWithinFiveStandardErrors) {
  Circuit c;
  c.n = 2;
  c.initial = {state_library("+"), state_library("0")};
  c.add(t_gate(), {0});
  c.add(unitary_channel(3, 2, csum_matrix(3)), {0, 1});
  c.add(t_gate(), {1});
  c.add(unitary_channel(3, 1, fourier_matrix(3)), {1});
  c.measured = {1};
  const double exact = exact_born(c);
  SamplerOptions opt;
  opt.samples = 200000;
  const auto r = estimate(c, 0.05, 0.1, 77, opt);
  EXPECT_EQ(r.samples, 200000u);
  const double se = std::sqrt(r.variance / static_cast<double>(r.samples));
  EXPECT_LE(std::abs(r.estimate - exact), 5.0 * se) << r.estimate << " vs " << exact;
  EXPECT_LE(r.max_abs_sample, r.bound * (1.0 + 1e-9));
}

TEST(Estimate, CpwpCircuitSamplesAProbabilityDistribution) {
  const Channel noisy = compose(depolarizing(3, 0.7), t_gate());
  ASSERT_TRUE(is_cpwp(noisy).cpwp);
  Circuit c;
  c.initial = {state_library("+")};
  c.add(noisy, {0});
  const auto prof = negativity_profile(c);
  EXPECT_NEAR(prof.forward, 1.0, 1e-10);
  const auto r = estimate(c, 0.05, 0.1, 3);
  EXPECT_LE(r.variance, 1.0);
  EXPECT_LE(r.max_abs_sample, 1.0 + 1e-9);
  EXPECT_NEAR(r.estimate, exact_born(c), 0.05);
}

TEST(Estimate, DeterministicAcrossThreadCounts) {
  const Circuit c = t_plus_circuit();
  SamplerOptions one;
  one.threads = 1;
  SamplerOptions many;
  many.threads = 4;
  const auto a = estimate(c, 0.05, 0.1, 11, one);
  const auto b = estimate(c, 0.05, 0.1, 11, many);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.variance, b.variance);
  const auto other = estimate(c, 0.05, 0.1, 12, one);
  EXPECT_NE(a.estimate, other.estimate);
}

TEST(ExactBorn, BackendsAgreeOnTPlus) {
  const Circuit c = t_plus_circuit();
  EXPECT_NEAR(exact_born(c, ExactBackend::DensityMatrix), exact_born(c, ExactBackend::Wigner), 1e-9);
}

TEST(ExactBorn, CliffordCircuitsGiveGridProbabilities) {
  Rng rng(21);
  const std::vector<double> grid = {0.0, 1.0 / 3.0, 1.0};
  for (int i = 0; i < 30; ++i) {
    Circuit c;
    c.n = 2;
    const Matrix u = random_clifford(3, 2, rng, 12);
    c.add(unitary_channel(3, 2, u), {0, 1});
    const double p = exact_born(c);
    oracle::M psi = oracle::M::Zero(9, 1);
    psi(0, 0) = 1.0;
    psi = u * psi;
    const double ref = std::norm(psi(0, 0)) + std::norm(psi(1, 0)) + std::norm(psi(2, 0));
    EXPECT_NEAR(p, ref, 1e-10);
    double best = 1.0;
    for (double g : grid) best = std::min(best, std::abs(p - g));
    EXPECT_LT(best, 1e-10) << p;
  }
}

TEST(ExactBorn, InversePairReturnsToPlus) {
  Circuit c;
  c.initial = {state_library("+")};
  c.add(t_gate(), {0});
  c.add(t_dagger(), {0});
  c.effect = state_library("+");
  EXPECT_NEAR(exact_born(c), 1.0, 1e-12);
  EXPECT_NEAR(exact_born(c, ExactBackend::Wigner), 1.0, 1e-12);
}

TEST(ExactBorn, BackendsAgreeOnRandomTwoQutritCircuits) {
  Rng rng(22);
  for (int i = 0; i < 40; ++i) {
    Circuit c;
    c.n = 2;
    c.initial = {random_state(3, 1, rng), random_state(3, 1, rng)};
    c.add(random_channel(3, 1, 1, rng), {i % 2});
    c.add(random_channel(3, 2, 2, rng, 2), {1, 0});
    c.add(t_gate(), {1});
    c.measured = {0, 1};
    c.effect = Operator(3, 2, random_state(3, 2, rng).matrix());
    EXPECT_NEAR(exact_born(c, ExactBackend::DensityMatrix), exact_born(c, ExactBackend::Wigner), 1e-9) << i;
  }
}

TEST(ExactBorn, SizeLimit) {
  Circuit c;
  c.n = 7;
  EXPECT_THROW(exact_born(c), SizeLimitError);
}

TEST(CircuitValidation, RejectsBadTargets) {
  Circuit c;
  c.n = 2;
  c.add(t_gate(), {2});
  EXPECT_THROW(c.validate(), Error);
  Circuit dup;
  dup.n = 2;
  dup.add(unitary_channel(3, 2, csum_matrix(3)), {1, 1});
  EXPECT_THROW(dup.validate(), Error);
  Circuit arity;
  arity.n = 2;
  arity.add(t_gate(), {0, 1});
  EXPECT_THROW(arity.validate(), Error);
}

// Preparation and measurement kept explicit give the same statistics as the
// folded form: a replacer as the first channel and a measure-and-prepare channel
// with a computational readout as the last.
TEST(Folding, ExplicitAndFoldedCircuitsAgree) {
  const Operator plus = state_library("+");
  const Operator effect = state_library("T");
  Circuit explicit_form = t_plus_circuit();
  explicit_form.effect = effect;

  Circuit folded;
  folded.add(replacer(plus), {0});
  folded.add(t_gate(), {0});
  const Matrix e = effect.matrix();
  const Matrix zero = state_library("0").matrix();
  const Matrix one = state_library("1").matrix();
  const Matrix id = Matrix::Identity(3, 3);
  folded.add(Channel::from_choi(3, 1, 1,
                                choi_from_map(3, 1, 1,
                                              [&](const Matrix& x) -> Matrix {
                                                return (e * x).trace() * zero + ((id - e) * x).trace() * one;
                                              })),
             {0});

  EXPECT_NEAR(exact_born(explicit_form), exact_born(folded), 1e-12);
  EXPECT_NEAR(exact_born(folded, ExactBackend::Wigner), exact_born(folded), 1e-9);
  const auto pe = negativity_profile(explicit_form);
  const auto pf = negativity_profile(folded);
  // the replacer onto a stabilizer state carries the unit state negativity
  EXPECT_NEAR(pf.gate_negativity.front(), pe.state, 1e-10);
  const auto re = estimate(explicit_form, 0.05, 0.1, 9);
  const auto rf = estimate(folded, 0.05, 0.1, 9);
  EXPECT_NEAR(re.estimate, rf.estimate, 0.1);
}

}  // namespace
