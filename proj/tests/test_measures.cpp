#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "certificates.hpp"
#include "magiclab/channels.hpp"
#include "magiclab/measures.hpp"
#include "magiclab/phase_space.hpp"
#include "magiclab/random.hpp"
#include "magiclab/stabilizer.hpp"
#include "oracles.hpp"

namespace {

using namespace magiclab;

const double kThetaT = std::log2(1.0 + 2.0 * std::sin(std::numbers::pi / 18.0));

TEST(StateMana, StabilizerStatesAreFree) {
  for (const auto& s : stabilizer_states(3, 1)) {
    EXPECT_NEAR(mana_state(Operator(3, 1, s)), 0.0, 1e-12);
    EXPECT_NEAR(sum_negativity(Operator(3, 1, s)), 0.0, 1e-12);
  }
  EXPECT_NEAR(mana_state(state_library("mixed")), 0.0, 1e-12);
}

TEST(StateMana, TStatePublishedValue) {
  EXPECT_NEAR(mana_state(state_library("T")), 0.6657, 1e-3);
}

TEST(StateMana, SumNegativityRelation) {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator rho = random_pure_state(3, 1, rng);
    const auto w = oracle::wigner(rho.matrix(), 3, 1);
    double neg = 0.0;
    for (double x : w) neg += x < 0 ? -x : 0.0;
    EXPECT_NEAR(sum_negativity(rho), neg, 1e-12);
    EXPECT_NEAR(mana_state(rho), std::log2(2.0 * neg + 1.0), 1e-12);
  }
}

TEST(StateMana, RejectsInvalidState) {
  EXPECT_THROW(mana_state(Operator(3, 1, 2.0 * Matrix::Identity(3, 3))), ValidationError);
  Matrix neg = Matrix::Identity(3, 3);
  neg(0, 0) = -1.0;
  EXPECT_THROW(mana_state(Operator(3, 1, neg)), ValidationError);
}

TEST(ChannelMana, CliffordsAreFree) {
  EXPECT_NEAR(mana_channel(identity_channel(3)).log2_value, 0.0, 1e-12);
  EXPECT_NEAR(mana_channel(unitary_channel(3, 1, fourier_matrix(3))).log2_value, 0.0, 1e-12);
  EXPECT_NEAR(mana_channel(unitary_channel(3, 1, phase_gate_matrix(3))).log2_value, 0.0, 1e-12);
  EXPECT_NEAR(mana_channel(unitary_channel(3, 2, csum_matrix(3))).log2_value, 0.0, 1e-12);
}

TEST(ChannelMana, TGateMatchesOracleWithFirstArgmax) {
  const auto r = mana_channel(t_gate());
  const auto ref = oracle::channel_table(oracle::unitary_choi(oracle::t_gate()), 3, 1, 1);
  EXPECT_NEAR(r.log2_value, oracle::log2_max_row_norm(ref), 1e-12);
  EXPECT_NEAR(r.exp_value, std::exp2(r.log2_value), 1e-12);
  const Eigen::VectorXd norms = ref.cwiseAbs().rowwise().sum();
  int first = 0;
  while (norms(first) < norms.maxCoeff() - 1e-12) ++first;
  ASSERT_TRUE(r.argmax_point.has_value());
  EXPECT_EQ(point_index(3, *r.argmax_point), static_cast<std::size_t>(first));
}

TEST(ChannelMana, CcxPublishedValue) {
  EXPECT_NEAR(mana_channel(ccx()).log2_value, 2.1876, 1e-3);
}

TEST(ChannelMana, WernerHolevoIsLogFiveThirds) {
  const auto r = mana_channel(werner_holevo());
  EXPECT_NEAR(r.log2_value, std::log2(5.0 / 3.0), 1e-12);
  EXPECT_NEAR(r.exp_value, 5.0 / 3.0, 1e-12);
}

TEST(ChannelMana, RejectsNonTracePreserving) {
  const Channel half = Channel::from_choi(3, 1, 1, 0.5 * identity_channel(3).choi());
  EXPECT_THROW(mana_channel(half), ValidationError);
  EXPECT_NO_THROW(mana_channel(half, false));
}

TEST(Cpwp, Examples) {
  EXPECT_TRUE(is_cpwp(depolarizing(3, 1.0)).cpwp);
  EXPECT_TRUE(is_cpwp(compose(depolarizing(3, 0.7), t_gate())).cpwp);
  const auto t = is_cpwp(t_gate());
  EXPECT_FALSE(t.cpwp);
  const auto ref = oracle::channel_table(oracle::unitary_choi(oracle::t_gate()), 3, 1, 1);
  EXPECT_NEAR(t.min_entry, ref.minCoeff(), 1e-12);
  const auto u = point_index(3, t.input);
  const auto v = point_index(3, t.output);
  EXPECT_NEAR(ref(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)), ref.minCoeff(), 1e-12);
}

TEST(Cpwp, ToleranceSeparatesNoise) {
  const auto wh = is_cpwp(werner_holevo());
  EXPECT_FALSE(wh.cpwp);
  EXPECT_NEAR(wh.min_entry, -1.0 / 3.0, 1e-12);
  EXPECT_TRUE(is_cpwp(werner_holevo(), 0.34).cpwp);
}

TEST(StateThauma, StabilizerIsZero) {
  for (const char* name : {"0", "+", "mixed"}) {
    EXPECT_NEAR(max_thauma_state(state_library(name)).log2_value, 0.0, 1e-6) << name;
  }
}

TEST(StateThauma, TStateClosedForm) {
  const auto r = max_thauma_state(state_library("T"));
  EXPECT_NEAR(r.log2_value, kThetaT, 1e-4);
  EXPECT_EQ(r.solver_status, "optimal");
  // the certificate dominates rho and has the reported Wigner norm
  EXPECT_GE(cert::min_eig(r.certificate - state_library("T").matrix()), -1e-7);
  EXPECT_NEAR(wigner_trace_norm(Operator(3, 1, r.certificate)), r.exp_value, 1e-6);
}

TEST(ChannelThauma, IdentityIsZero) {
  EXPECT_NEAR(max_thauma_channel(identity_channel(3)).log2_value, 0.0, 1e-6);
}

TEST(ChannelThauma, TGateClosedFormPrimalAndDual) {
  const auto primal = max_thauma_channel(t_gate());
  const auto dual = max_thauma_channel_dual(t_gate());
  EXPECT_NEAR(primal.log2_value, kThetaT, 1e-4);
  EXPECT_NEAR(dual.log2_value, kThetaT, 1e-4);
  const Matrix j = t_gate().choi();
  EXPECT_NEAR(std::log2(cert::upper_bound(primal.certificate, j, 3, 1, 1)), kThetaT, 1e-4);
  EXPECT_NEAR(std::log2(cert::lower_bound(dual.certificate, j, 3, 1, 1)), kThetaT, 1e-4);
}

TEST(ChannelThauma, SizeGate) {
  EXPECT_THROW(max_thauma_channel(ccx()), SizeLimitError);
  EXPECT_THROW(max_thauma_channel(identity_channel(3, 2)), SizeLimitError);
}

TEST(RobustnessWplus, WignerPositiveStatesHaveUnitRobustness) {
  Rng rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    EXPECT_NEAR(robustness_wplus(random_wplus_state(3, 1, rng)).exp_value, 1.0, 1e-6);
  }
  EXPECT_NEAR(robustness_wplus(state_library("Phi")).exp_value, 1.0, 1e-6);
}

TEST(RobustnessWplus, TChoiStateExceedsExponentiatedMana) {
  const Operator phi(3, 2, t_gate().choi() / 3.0);
  const auto r = robustness_wplus(phi);
  EXPECT_GT(r.exp_value, std::exp2(mana_channel(t_gate()).log2_value) + 1e-3);
  // decomposition certificate: rho = (1 + p) sigma - p omega, both Wigner non-negative states
  const double p = (r.exp_value - 1.0) / 2.0;
  EXPECT_LT(((1.0 + p) * r.certificate - p * r.certificate2 - phi.matrix()).norm(), 1e-6);
  EXPECT_GE(wigner_of_state(Operator(3, 2, r.certificate), 1e-6).values().minCoeff(), -1e-7);
  EXPECT_GE(wigner_of_state(Operator(3, 2, r.certificate2), 1e-6).values().minCoeff(), -1e-7);
}

TEST(RobustnessWplus, MonotoneUnderDephasing) {
  Rng rng(3);
  const std::array<double, 3> probs{0.5, 0.3, 0.2};
  const Channel deph = dephasing(probs);
  for (int trial = 0; trial < 30; ++trial) {
    const Operator rho = random_state(3, 1, rng, 1 + trial % 3);
    EXPECT_LE(robustness_wplus(apply(deph, rho)).exp_value, robustness_wplus(rho).exp_value + 1e-6);
  }
}

TEST(Stabilizer, EnumerationCounts) {
  EXPECT_EQ(stabilizer_states(3, 1).size(), 12u);
  EXPECT_EQ(stabilizer_states(3, 2).size(), 360u);
  EXPECT_EQ(stabilizer_states(5, 1).size(), 30u);
}

TEST(RobustnessStab, StabilizerStateIsOne) {
  EXPECT_NEAR(robustness_stab(state_library("0")).exp_value, 1.0, 1e-6);
  EXPECT_NEAR(robustness_stab(state_library("+")).exp_value, 1.0, 1e-6);
}

TEST(RobustnessStab, TStateRegressionAndDecomposition) {
  const Operator t = state_library("T");
  const auto r = robustness_stab(t);
  EXPECT_NEAR(r.exp_value, 1.940983, 1e-5);
  const auto stabs = stabilizer_states(3, 1);
  ASSERT_EQ(r.weights.size(), static_cast<Eigen::Index>(stabs.size()));
  Matrix sum = Matrix::Zero(3, 3);
  for (std::size_t i = 0; i < stabs.size(); ++i) sum += r.weights(static_cast<Eigen::Index>(i)) * stabs[i];
  EXPECT_LT((sum - t.matrix()).norm(), 1e-6);
  EXPECT_NEAR(r.weights.cwiseAbs().sum(), r.exp_value, 1e-6);
}

TEST(RobustnessStab, SizeGate) {
  Rng rng(4);
  EXPECT_THROW(robustness_stab(random_state(3, 3, rng)), SizeLimitError);
}

TEST(RobustnessStab, DominatesWignerRobustness) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const Operator rho = random_state(3, 1, rng, 1 + trial % 3);
    EXPECT_GE(robustness_stab(rho).exp_value, robustness_wplus(rho).exp_value - 1e-6);
  }
}

TEST(Amortized, WernerHolevoWithMaximallyEntangledInput) {
  const auto r = amortized_lower_bound(werner_holevo(), {state_library("Phi")});
  EXPECT_NEAR(r.gain, std::log2(5.0 / 3.0), 1e-8);
  EXPECT_NEAR(r.gain, r.channel_mana, 1e-8);
}

TEST(Amortized, CpwpChannelsNeverGain) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Channel c = random_cpwp_channel(3, 1, rng);
    std::vector<Operator> inputs;
    for (int k = 0; k < 5; ++k) inputs.push_back(random_state(3, 2, rng, 1));
    EXPECT_LE(amortized_lower_bound(c, inputs).gain, 1e-9);
  }
}

TEST(Amortized, ReplacerGainIsDifferenceOfStateManas) {
  Rng rng(7);
  const Operator sigma = state_library("T");
  for (int trial = 0; trial < 10; ++trial) {
    const Operator ref = random_state(3, 1, rng, 1);
    const Operator in = random_state(3, 1, rng, 1);
    const auto r = amortized_lower_bound(replacer(sigma), {kron(ref, in)});
    EXPECT_NEAR(r.gain, mana_state(sigma) - mana_state(in), 1e-10);
    EXPECT_LE(r.gain, mana_state(sigma) + 1e-12);
  }
}

TEST(DistillableT, TGateIsOneAndIdentityZero) {
  EXPECT_NEAR(distillable_t_bound(t_gate()), 1.0, 1e-4);
  EXPECT_NEAR(distillable_t_bound(identity_channel(3)), 0.0, 1e-5);
}

TEST(DistillableT, NonincreasingInDepolarizingNoise) {
  double previous = 2.0;
  for (double p = 0.0; p <= 0.7001; p += 0.05) {
    const double b = distillable_t_bound(compose(depolarizing(3, p), t_gate()));
    EXPECT_LE(b, previous + 1e-5) << p;
    previous = b;
  }
}

TEST(Injectable, TGateFromTState) {
  const auto b = injectable_bounds(t_gate(), state_library("T"));
  EXPECT_TRUE(b.holds);
  EXPECT_NEAR(b.mana_channel, b.mana_resource, 1e-6);
  EXPECT_NEAR(b.thauma_channel, b.thauma_resource, 1e-4);
}

TEST(Injectable, DephasedT) {
  const std::array<double, 3> probs{0.7, 0.2, 0.1};
  const Channel deph = dephasing(probs);
  const auto b = injectable_bounds(compose(deph, t_gate()), apply(deph, state_library("T")));
  EXPECT_TRUE(b.holds);
}

TEST(Injectable, IdentityFromMixed) {
  const auto b = injectable_bounds(identity_channel(3), state_library("mixed"));
  EXPECT_TRUE(b.holds);
  EXPECT_NEAR(b.mana_resource, 0.0, 1e-12);
  EXPECT_NEAR(b.thauma_resource, 0.0, 1e-6);
  EXPECT_NEAR(b.mana_channel, 0.0, 1e-12);
  EXPECT_NEAR(b.thauma_channel, 0.0, 1e-6);
}

}  // namespace
