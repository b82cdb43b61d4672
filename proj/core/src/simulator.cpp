#include "magiclab/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "tensor.hpp"

namespace magiclab {

void Circuit::validate(int max_arity) const {
  require_odd_prime(d);
  if (n < 1) throw DimensionError("circuit needs at least one qudit");
  if (!initial.empty() && static_cast<int>(initial.size()) != n) {
    throw DimensionError("initial state list must have one entry per qudit");
  }
  for (const auto& rho : initial) {
    if (rho.d() != d || rho.n() != 1) throw DimensionError("initial states must be single qudits");
  }
  for (const auto& g : gates) {
    const auto k = static_cast<int>(g.targets.size());
    if (k < 1 || k > max_arity) {
      throw DimensionError("gate acts on " + std::to_string(k) + " qudits (limit " + std::to_string(max_arity) + ")");
    }
    if (g.channel.d() != d || g.channel.n_in() != k || g.channel.n_out() != k) {
      throw DimensionError("gate " + g.label + " does not match its targets");
    }
    detail::require_targets(n, g.targets);
  }
  const auto meas = measured_qudits();
  detail::require_targets(n, meas);
  const Operator e = effect_operator();
  if (e.d() != d || e.n() != static_cast<int>(meas.size())) throw DimensionError("effect does not match measured qudits");
}

Circuit& Circuit::add(Channel channel, std::vector<int> targets, std::string label) {
  gates.push_back(Gate{std::move(channel), std::move(targets), std::move(label)});
  return *this;
}

Operator Circuit::initial_state(int q) const {
  if (initial.empty()) return state_library("0", d);
  return initial.at(static_cast<std::size_t>(q));
}

std::vector<int> Circuit::measured_qudits() const { return measured.empty() ? std::vector<int>{0} : measured; }

Operator Circuit::effect_operator() const {
  if (effect) return *effect;
  return state_library("0", d);
}

namespace {

// Sampling data for one conditional table: cumulative |W| per row.
struct RowSampler {
  Eigen::Index cols = 0;
  RealMatrix values;  // signed table
  std::vector<double> cumulative;
  RealVector norms;

  explicit RowSampler(const RealMatrix& table) : cols(table.cols()), values(table) {
    norms.resize(table.rows());
    cumulative.resize(static_cast<std::size_t>(table.size()));
    for (Eigen::Index u = 0; u < table.rows(); ++u) {
      double acc = 0.0;
      for (Eigen::Index v = 0; v < cols; ++v) {
        acc += std::abs(table(u, v));
        cumulative[static_cast<std::size_t>(u * cols + v)] = acc;
      }
      norms(u) = acc;
    }
  }

  // Returns v with probability |W(v|u)| / norm(u).
  Eigen::Index draw(Eigen::Index u, double unit) const {
    const auto first = cumulative.begin() + u * cols;
    const auto last = first + cols;
    const double r = unit * norms(u);
    auto it = std::upper_bound(first, last, r);
    if (it == last) --it;
    return static_cast<Eigen::Index>(it - first);
  }
};

double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

NegativityProfile negativity_profile(const Circuit& circuit) {
  circuit.validate();
  NegativityProfile prof;
  for (const auto& g : circuit.gates) {
    const RealVector norms = wigner_of_channel(g.channel).row_norms();
    prof.gate_negativity.push_back(norms.maxCoeff());
    prof.forward *= norms.maxCoeff();
    prof.row_norms.push_back(norms);
  }
  for (int q = 0; q < circuit.n; ++q) prof.state *= wigner_of_state(circuit.initial_state(q)).values().cwiseAbs().sum();
  prof.effect = wigner_of_measurement(circuit.effect_operator()).values().cwiseAbs().maxCoeff();
  prof.bound = prof.state * prof.forward * prof.effect;
  return prof;
}

std::uint64_t sample_count(double epsilon, double delta, double bound) {
  if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  if (!(bound >= 0.0) || !std::isfinite(bound)) throw ValidationError("negativity bound must be finite");
  const double count = 2.0 / (epsilon * epsilon) * bound * bound * std::log(2.0 / delta);
  // guard against 4.0000000000000009 style rounding of exact products
  const double rounded = std::round(count);
  const double n = std::abs(count - rounded) <= 1e-9 * std::max(1.0, rounded) ? rounded : std::ceil(count);
  return static_cast<std::uint64_t>(n);
}

EstimateResult estimate(const Circuit& circuit, double epsilon, double delta, std::uint64_t seed,
                        const SamplerOptions& options) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  if (options.shards < 1) throw ValidationError("need at least one shard");
  const NegativityProfile prof = negativity_profile(circuit);
  const int d = circuit.d;
  const int n = circuit.n;
  const auto dd = static_cast<std::size_t>(d * d);

  std::vector<RowSampler> initial;
  for (int q = 0; q < n; ++q) initial.emplace_back(wigner_of_state(circuit.initial_state(q)).values());
  std::vector<RowSampler> gates;
  std::vector<std::vector<std::size_t>> weights;  // local index weights per gate
  for (const auto& g : circuit.gates) {
    gates.emplace_back(wigner_of_channel(g.channel).values());
    std::vector<std::size_t> w(g.targets.size());
    std::size_t acc = 1;
    for (std::size_t j = g.targets.size(); j-- > 0;) {
      w[j] = acc;
      acc *= dd;
    }
    weights.push_back(std::move(w));
  }
  const auto meas = circuit.measured_qudits();
  const RealMatrix effect = wigner_of_measurement(circuit.effect_operator()).values();

  EstimateResult res;
  res.samples = options.samples > 0 ? options.samples : sample_count(epsilon, delta, prof.bound);
  res.epsilon = epsilon;
  res.delta = delta;
  res.seed = seed;
  res.shards = options.shards;
  res.bound = prof.bound;
  const double limit = prof.bound * (1.0 + 1e-9) + 1e-12;

  struct ShardResult {
    double sum = 0.0;
    double sum_sq = 0.0;
    double max_abs = 0.0;
    bool violated = false;
  };
  std::vector<ShardResult> shard_results(static_cast<std::size_t>(options.shards));
  const std::uint64_t base = res.samples / static_cast<std::uint64_t>(options.shards);
  const std::uint64_t extra = res.samples % static_cast<std::uint64_t>(options.shards);

  auto run_shard = [&](int shard) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(shard)};
    std::mt19937_64 rng(seq);
    ShardResult out;
    const std::uint64_t count = base + (static_cast<std::uint64_t>(shard) < extra ? 1 : 0);
    std::vector<Eigen::Index> point(static_cast<std::size_t>(n));
    for (std::uint64_t s = 0; s < count; ++s) {
      double weight = 1.0;
      for (int q = 0; q < n; ++q) {
        const auto& smp = initial[static_cast<std::size_t>(q)];
        const Eigen::Index v = smp.draw(0, unit_draw(rng));
        point[static_cast<std::size_t>(q)] = v;
        weight *= smp.norms(0) * (smp.values(0, v) < 0 ? -1.0 : 1.0);
      }
      for (std::size_t l = 0; l < gates.size(); ++l) {
        const auto& targets = circuit.gates[l].targets;
        const auto& w = weights[l];
        Eigen::Index u = 0;
        for (std::size_t j = 0; j < targets.size(); ++j) {
          u += point[static_cast<std::size_t>(targets[j])] * static_cast<Eigen::Index>(w[j]);
        }
        const auto& smp = gates[l];
        const Eigen::Index v = smp.draw(u, unit_draw(rng));
        weight *= smp.norms(u) * (smp.values(u, v) < 0 ? -1.0 : 1.0);
        for (std::size_t j = 0; j < targets.size(); ++j) {
          point[static_cast<std::size_t>(targets[j])] = (v / static_cast<Eigen::Index>(w[j])) % static_cast<Eigen::Index>(dd);
        }
      }
      Eigen::Index e = 0;
      for (int q : meas) e = e * static_cast<Eigen::Index>(dd) + point[static_cast<std::size_t>(q)];
      const double value = weight * effect(0, e);
      if (std::abs(value) > limit) out.violated = true;
      out.sum += value;
      out.sum_sq += value * value;
      out.max_abs = std::max(out.max_abs, std::abs(value));
    }
    shard_results[static_cast<std::size_t>(shard)] = out;
  };

  int threads = options.threads > 0 ? options.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, options.shards);
  if (threads == 1) {
    for (int s = 0; s < options.shards; ++s) run_shard(s);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int s = next++; s < options.shards; s = next++) run_shard(s);
      });
    }
    for (auto& th : pool) th.join();
  }

  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& r : shard_results) {
    if (r.violated) throw Error("sample magnitude exceeded the negativity bound");
    sum += r.sum;
    sum_sq += r.sum_sq;
    res.max_abs_sample = std::max(res.max_abs_sample, r.max_abs);
  }
  const auto total = static_cast<double>(res.samples);
  res.estimate = res.samples > 0 ? sum / total : 0.0;
  res.variance = res.samples > 1 ? std::max(0.0, (sum_sq - total * res.estimate * res.estimate) / (total - 1.0)) : 0.0;
  return res;
}

double exact_born(const Circuit& circuit, ExactBackend backend, int max_qudits) {
  circuit.validate();
  if (circuit.n > max_qudits) {
    throw SizeLimitError("exact simulation limited to " + std::to_string(max_qudits) + " qudits");
  }
  const int d = circuit.d;
  const int n = circuit.n;
  const auto meas = circuit.measured_qudits();
  const Operator effect = circuit.effect_operator();

  if (backend == ExactBackend::DensityMatrix) {
    Operator rho = circuit.initial_state(0);
    for (int q = 1; q < n; ++q) rho = kron(rho, circuit.initial_state(q));
    for (const auto& g : circuit.gates) rho = apply_local(g.channel, rho, g.targets);
    return detail::apply_left_local(effect.matrix(), rho.matrix(), d, n, meas).trace().real();
  }

  WignerTable w = wigner_of_state(circuit.initial_state(0));
  for (int q = 1; q < n; ++q) w = tensor_tables(w, wigner_of_state(circuit.initial_state(q)));
  for (const auto& g : circuit.gates) w = propagate(w, wigner_of_channel(g.channel), g.targets);
  const RealMatrix e = wigner_of_measurement(effect).values();
  const auto idx = detail::local_index(static_cast<std::size_t>(d * d), n, meas);
  double total = 0.0;
  for (std::size_t b : idx.base) {
    for (std::size_t t = 0; t < idx.offset.size(); ++t) {
      total += w[static_cast<Eigen::Index>(b + idx.offset[t])] * e(0, static_cast<Eigen::Index>(t));
    }
  }
  return total;
}

}  // namespace magiclab
