#include <atomic>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

#include "cli.hpp"
#include "magiclab/channels.hpp"
#include "magiclab/io.hpp"
#include "magiclab/measures.hpp"
#include "magiclab/phase_space.hpp"

namespace magiclab::cli {

std::vector<double> parse_grid(const std::string& spec) {
  const auto first = spec.find(':');
  const auto second = first == std::string::npos ? std::string::npos : spec.find(':', first + 1);
  if (second == std::string::npos) throw ValidationError("grid must look like a:b:step");
  const auto num = [](const std::string& text) { return io::parse_number(text); };
  const double a = num(spec.substr(0, first));
  const double b = num(spec.substr(first + 1, second - first - 1));
  const double step = num(spec.substr(second + 1));
  if (!(step > 0.0) || b < a) throw ValidationError("grid needs a <= b and step > 0");
  const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > 100000) throw ValidationError("grid has too many points");
  std::vector<double> out;
  for (long k = 0; k < count; ++k) out.push_back(a + static_cast<double>(k) * step);
  return out;
}

namespace {

std::vector<double> dep_t_row(double p) {
  const Channel c = compose(depolarizing(3, p), t_gate());
  const WignerTable table = wigner_of_channel(c);
  const double norm = table.row_norms().maxCoeff();
  const auto cp = is_cpwp(table);
  const double thauma = max_thauma_channel(c).log2_value;
  return {p, std::log2(norm), norm, cp.min_entry, cp.cpwp ? 1.0 : 0.0, thauma};
}

WignerTable noisy_ccx_table(double p, const WignerTable& ccx_table) {
  const WignerTable dep = wigner_of_channel(depolarizing(3, p));
  const WignerTable dep3 = tensor_tables(tensor_tables(dep, dep), dep);
  return compose_tables(dep3, ccx_table);
}

}  // namespace

SweepTable run_sweep(const std::string& family, const std::vector<double>& grid, int threads, double target_noise) {
  SweepTable table;
  std::function<std::vector<double>(double)> row;
  std::optional<WignerTable> ccx_table;
  double target_mana = 0.0;
  if (family == "dep-t") {
    table.columns = {"p", "mana", "exp_mana", "min_entry", "cpwp", "thauma"};
    row = dep_t_row;
  } else if (family == "dep3-ccx") {
    table.columns = {"p", "mana", "exp_mana"};
    ccx_table = wigner_of_channel(ccx());
    row = [&](double p) {
      const double norm = noisy_ccx_table(p, *ccx_table).row_norms().maxCoeff();
      return std::vector<double>{p, std::log2(norm), norm};
    };
  } else if (family == "utheta") {
    table.columns = {"theta", "mana", "exp_mana", "rob_wplus"};
    row = [](double theta) {
      const Channel u = u_theta(theta);
      const auto m = mana_channel(u);
      const Operator phi(3, 2, u.choi() / 3.0);
      const double rob = robustness_wplus(phi).exp_value;
      return std::vector<double>{theta, m.log2_value, m.exp_value, rob};
    };
  } else if (family == "noisy-ccx") {
    table.columns = {"p", "mana_target", "mana_resource", "ratio"};
    ccx_table = wigner_of_channel(ccx());
    target_mana = std::log2(noisy_ccx_table(target_noise, *ccx_table).row_norms().maxCoeff());
    row = [&](double p) {
      const double resource = mana_channel(compose(depolarizing(3, p), t_gate())).log2_value;
      const double ratio = resource <= 1e-9 ? std::numeric_limits<double>::infinity() : target_mana / resource;
      return std::vector<double>{p, target_mana, resource, ratio};
    };
  } else {
    throw ValidationError("unknown sweep family '" + family + "' (known: dep-t, dep3-ccx, utheta, noisy-ccx)");
  }
  for (double x : grid) {
    if (family != "utheta" && !(x >= 0.0 && x <= 1.0)) throw ValidationError("noise parameter must lie in [0, 1]");
  }

  table.rows.resize(grid.size());
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(grid.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t k = next++; k < grid.size(); k = next++) {
      try {
        table.rows[k].values = row(grid[k]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return table;
}

void write_csv(const SweepTable& table, std::ostream& out) {
  out << "# schema: 1\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  char buf[64];
  for (const auto& r : table.rows) {
    for (std::size_t c = 0; c < r.values.size(); ++c) {
      const double v = r.values[c];
      if (std::isinf(v)) {
        std::snprintf(buf, sizeof buf, "%s", v > 0 ? "inf" : "-inf");
      } else {
        std::snprintf(buf, sizeof buf, "%.12g", v);
      }
      out << (c ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace magiclab::cli
