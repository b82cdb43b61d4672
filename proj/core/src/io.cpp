#include "magiclab/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>

namespace magiclab::io {

double round_sig(double x, int digits) {
  if (!std::isfinite(x) || x == 0.0) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

namespace {

Json number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return nullptr;
  return round_sig(x);
}

Json matrix_rows(const RealMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

RealMatrix rows_matrix(const Json& rows) {
  if (!rows.is_array() || rows.empty()) throw ValidationError("matrix must be a non-empty array of rows");
  const auto r = static_cast<Eigen::Index>(rows.size());
  const auto c = static_cast<Eigen::Index>(rows[0].size());
  RealMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const Json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) throw ValidationError("ragged matrix rows");
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return m;
}

}  // namespace

Json to_json(const Operator& op) {
  return {{"d", op.d()}, {"n", op.n()}, {"re", matrix_rows(op.matrix().real())}, {"im", matrix_rows(op.matrix().imag())}};
}

Operator operator_from_json(const Json& j) {
  try {
    const int d = j.at("d").get<int>();
    const int n = j.at("n").get<int>();
    const RealMatrix re = rows_matrix(j.at("re"));
    const RealMatrix im = j.contains("im") ? rows_matrix(j.at("im")) : RealMatrix::Zero(re.rows(), re.cols());
    if (re.rows() != im.rows() || re.cols() != im.cols()) throw ValidationError("re and im shapes differ");
    Matrix m(re.rows(), re.cols());
    m.real() = re;
    m.imag() = im;
    return Operator(d, n, std::move(m));
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed operator JSON: ") + e.what());
  }
}

Json to_json(const WignerTable& table) {
  return {{"d", table.d()}, {"n_in", table.n_in()}, {"n_out", table.n_out()}, {"values", matrix_rows(table.values())}};
}

Json to_json(const Channel& channel) {
  return {{"d", channel.d()},
          {"n_in", channel.n_in()},
          {"n_out", channel.n_out()},
          {"choi", to_json(Operator(channel.d(), channel.n_in() + channel.n_out(), channel.choi()))}};
}

Channel channel_from_json(const Json& j) {
  try {
    const Operator choi = operator_from_json(j.at("choi"));
    return Channel::from_choi(j.at("d").get<int>(), j.at("n_in").get<int>(), j.at("n_out").get<int>(), choi.matrix());
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed channel JSON: ") + e.what());
  }
}

Json to_json(const PhasePoint& point) {
  Json out = Json::array();
  for (const auto& [a1, a2] : point.components) out.push_back({a1, a2});
  return out;
}

Json to_json(const MeasureReport& report) {
  Json j = {{"schema", 1},
            {"measure", report.measure},
            {"log2_value", number(report.log2_value)},
            {"exp_value", number(report.exp_value)},
            {"solver_status", report.solver_status},
            {"gap", number(report.gap)}};
  if (report.argmax_point) j["argmax_point"] = to_json(*report.argmax_point);
  return j;
}

Json to_json(const CpwpResult& result) {
  return {{"schema", 1},
          {"cpwp", result.cpwp},
          {"min_entry", number(result.min_entry)},
          {"witness", {{"input", to_json(result.input)}, {"output", to_json(result.output)}}}};
}

Json to_json(const SynthesisBound& b) {
  Json j = {{"schema", 1},
            {"target", b.target},
            {"resource", b.resource},
            {"mana_target", number(b.mana_target)},
            {"mana_resource", number(b.mana_resource)},
            {"mana_ratio", number(b.mana_ratio)},
            {"bound", number(b.bound)}};
  j["thauma_target"] = b.thauma_target ? number(*b.thauma_target) : Json(nullptr);
  j["thauma_resource"] = b.thauma_resource ? number(*b.thauma_resource) : Json(nullptr);
  j["thauma_ratio"] = b.thauma_ratio ? number(*b.thauma_ratio) : Json(nullptr);
  j["ceiling"] = b.ceiling ? Json(*b.ceiling) : Json(nullptr);
  if (!b.note.empty()) j["note"] = b.note;
  return j;
}

Json to_json(const ApproxBound& b) {
  return {{"schema", 1},
          {"epsilon", number(b.epsilon)},
          {"min_row_norm", number(b.min_row_norm)},
          {"mana_approximation", number(b.mana_approximation)},
          {"mana_resource", number(b.mana_resource)},
          {"k", number(b.k)},
          {"bound", b.bound ? Json(*b.bound) : Json(nullptr)},
          {"solver_status", b.solver_status}};
}

Json to_json(const EstimateResult& r) {
  return {{"schema", 1},
          {"estimate", number(r.estimate)},
          {"samples", r.samples},
          {"epsilon", number(r.epsilon)},
          {"delta", number(r.delta)},
          {"variance", number(r.variance)},
          {"seed", r.seed},
          {"shards", r.shards},
          {"bound", number(r.bound)},
          {"max_abs_sample", number(r.max_abs_sample)}};
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ValidationError("invalid JSON in " + path + ": " + e.what());
  }
}

std::string resolve(const std::string& path, const std::string& base_dir) {
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

namespace {

const std::vector<std::string> kTokens = {"id",    "t",     "tdg",  "ccx",    "wh",       "f",
                                          "h",     "s",     "csum", "shift",  "clock",    "dep",
                                          "deph",  "utheta", "unitary", "choi", "replacer"};

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::string suggestion(const std::string& name) {
  std::string best;
  std::size_t best_d = 3;
  for (const auto& t : kTokens) {
    const auto dist = edit_distance(name, t);
    if (dist < best_d) {
      best_d = dist;
      best = t;
    }
  }
  return best.empty() ? "" : " (did you mean '" + best + "'?)";
}

}  // namespace

double parse_number(const std::string& text) {
  std::string body = text;
  double factor = 1.0;
  if (body.size() >= 2 && body.compare(body.size() - 2, 2, "pi") == 0) {
    factor = std::numbers::pi;
    body.resize(body.size() - 2);
    if (body.empty()) body = "1";
  }
  char* end = nullptr;
  const double v = std::strtod(body.c_str(), &end);
  if (end == body.c_str() || *end != '\0') throw ValidationError("invalid number '" + text + "'");
  return v * factor;
}

namespace {

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.push_back(parse_number(text.substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

Channel make_channel(const std::string& name, const std::string& arg, bool has_arg, const std::string& base_dir) {
  auto require_arg = [&] {
    if (!has_arg || arg.empty()) throw ValidationError("channel '" + name + "' needs an argument");
  };
  auto forbid_arg = [&] {
    if (has_arg) throw ValidationError("channel '" + name + "' takes no argument");
  };
  if (name == "id") {
    const int n = has_arg ? static_cast<int>(parse_number(arg)) : 1;
    if (n < 1) throw ValidationError("id needs a positive qudit count");
    return identity_channel(3, n);
  }
  if (name == "t") return forbid_arg(), t_gate();
  if (name == "tdg") return forbid_arg(), t_dagger();
  if (name == "ccx") return forbid_arg(), ccx();
  if (name == "wh") return forbid_arg(), werner_holevo();
  if (name == "f" || name == "h") return forbid_arg(), unitary_channel(3, 1, fourier_matrix(3));
  if (name == "s") return forbid_arg(), unitary_channel(3, 1, phase_gate_matrix(3));
  if (name == "csum") return forbid_arg(), unitary_channel(3, 2, csum_matrix(3));
  if (name == "shift") return forbid_arg(), unitary_channel(3, 1, shift_matrix(3));
  if (name == "clock") return forbid_arg(), unitary_channel(3, 1, clock_matrix(3));
  if (name == "dep") {
    require_arg();
    return depolarizing(3, parse_number(arg));
  }
  if (name == "deph") {
    require_arg();
    const auto p = parse_numbers(arg);
    if (p.size() != 3) throw ValidationError("deph needs three probabilities");
    return dephasing(p);
  }
  if (name == "utheta") {
    require_arg();
    return u_theta(parse_number(arg));
  }
  if (name == "unitary") {
    require_arg();
    const Operator u = operator_from_json(load_json(resolve(arg, base_dir)));
    return Channel::from_unitary(u);
  }
  if (name == "choi") {
    require_arg();
    return channel_from_json(load_json(resolve(arg, base_dir)));
  }
  if (name == "replacer") {
    require_arg();
    const Operator sigma = parse_state(arg, base_dir);
    return replacer(sigma, 1);
  }
  throw ValidationError("unknown channel '" + name + "'" + suggestion(name));
}

// Recursive-descent parser over the raw expression bytes.
class Parser {
 public:
  Parser(const std::string& text, const std::string& base_dir) : s_(text), base_(base_dir) {}

  Channel parse() {
    Channel c = expr();
    skip_space();
    if (pos_ != s_.size()) fail("unexpected '" + s_.substr(pos_) + "'");
    return c;
  }

 private:
  static constexpr const char* kCompose = "\xE2\x88\x98";  // U+2218
  static constexpr const char* kTensor = "\xE2\x8A\x97";   // U+2297

  [[noreturn]] void fail(const std::string& msg) const { throw ValidationError("channel expression: " + msg); }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool starts_with(const char* lit) const { return s_.compare(pos_, std::char_traits<char>::length(lit), lit) == 0; }

  bool accept_compose() {
    skip_space();
    if (starts_with(kCompose)) {
      pos_ += 3;
      return true;
    }
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_tensor() {
    const std::size_t save = pos_;
    const bool had_space = pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]));
    skip_space();
    if (starts_with(kTensor)) {
      pos_ += 3;
      return true;
    }
    if (had_space && pos_ + 1 < s_.size() && s_[pos_] == 'x' && std::isspace(static_cast<unsigned char>(s_[pos_ + 1]))) {
      pos_ += 2;
      return true;
    }
    pos_ = save;
    return false;
  }

  Channel expr() {
    Channel c = term();
    while (accept_compose()) {
      Channel rhs = term();
      c = compose(c, rhs);
    }
    return c;
  }

  Channel term() {
    Channel c = atom();
    while (accept_tensor()) c = tensor(c, atom());
    return c;
  }

  Channel atom() {
    skip_space();
    if (pos_ >= s_.size()) fail("expected a channel");
    if (s_[pos_] == '(') {
      ++pos_;
      Channel c = expr();
      skip_space();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("missing ')'");
      ++pos_;
      return c;
    }
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string name = s_.substr(start, pos_ - start);
    if (name.empty()) fail("expected a channel name at '" + s_.substr(start) + "'");
    if (pos_ >= s_.size() || s_[pos_] != ':') return make_channel(name, "", false, base_);
    ++pos_;
    const bool file_arg = name == "unitary" || name == "choi" || name == "replacer";
    const std::size_t arg_start = pos_;
    while (pos_ < s_.size()) {
      const char ch = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(ch)) || ch == ')' || ch == '(' || starts_with(kCompose) ||
          starts_with(kTensor)) {
        break;
      }
      // '.' is a decimal point between digits (or inside file names), composition otherwise
      if (ch == '.' && !file_arg) {
        const bool digit_before = pos_ > arg_start && std::isdigit(static_cast<unsigned char>(s_[pos_ - 1]));
        const bool digit_after = pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]));
        const bool leading = (pos_ == arg_start || s_[pos_ - 1] == ',') && digit_after;
        if (!(digit_before && digit_after) && !leading) break;
      }
      ++pos_;
    }
    return make_channel(name, s_.substr(arg_start, pos_ - arg_start), true, base_);
  }

  const std::string& s_;
  const std::string& base_;
  std::size_t pos_ = 0;
};

}  // namespace

Channel parse_channel(const std::string& expr, const std::string& base_dir) {
  return Parser(expr, base_dir).parse();
}

std::vector<std::string> channel_token_names() { return kTokens; }

Operator parse_state(const std::string& spec, const std::string& base_dir) {
  if (spec.rfind("file:", 0) == 0) return operator_from_json(load_json(resolve(spec.substr(5), base_dir)));
  if (spec.size() > 5 && spec.compare(spec.size() - 5, 5, ".json") == 0) {
    return operator_from_json(load_json(resolve(spec, base_dir)));
  }
  const auto names = state_names();
  if (std::find(names.begin(), names.end(), spec) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
    throw ValidationError("unknown state '" + spec + "' (known: " + list + ")");
  }
  return state_library(spec, 3);
}

Circuit circuit_from_json(const Json& j, const std::string& base_dir) {
  try {
    Circuit c;
    c.d = j.value("d", 3);
    c.n = j.at("n").get<int>();
    if (c.d != 3 && j.contains("gates")) {
      for (const auto& g : j.at("gates")) {
        if (g.contains("name")) throw ValidationError("named gates are qutrit channels; use choi_file for d != 3");
      }
    }
    if (j.contains("initial")) {
      for (const auto& s : j.at("initial")) {
        if (s.is_string()) {
          const auto spec = s.get<std::string>();
          c.initial.push_back(c.d == 3 ? parse_state(spec, base_dir) : state_library(spec, c.d));
        } else {
          c.initial.push_back(operator_from_json(s));
        }
      }
    }
    if (j.contains("gates")) {
      for (const auto& g : j.at("gates")) {
        Gate gate{g.contains("name") ? parse_channel(g.at("name").get<std::string>(), base_dir)
                                     : channel_from_json(load_json(resolve(g.at("choi_file").get<std::string>(), base_dir))),
                  g.at("targets").get<std::vector<int>>(),
                  g.contains("name") ? g.at("name").get<std::string>() : g.at("choi_file").get<std::string>()};
        c.gates.push_back(std::move(gate));
      }
    }
    if (j.contains("measure")) {
      const Json& m = j.at("measure");
      if (m.contains("qudits")) {
        c.measured = m.at("qudits").get<std::vector<int>>();
      } else if (m.contains("qudit")) {
        c.measured = {m.at("qudit").get<int>()};
      }
      if (m.contains("effect")) {
        const Json& e = m.at("effect");
        if (e.is_string()) {
          const auto name = e.get<std::string>();
          const auto k = std::max<int>(1, static_cast<int>(c.measured.size()));
          if (name == "I") {
            c.effect = Operator::identity(c.d, k);
          } else {
            Operator proj = c.d == 3 ? parse_state(name, base_dir) : state_library(name, c.d);
            Operator full = proj;
            for (int q = 1; q < k; ++q) full = kron(full, proj);
            c.effect = full;
          }
        } else {
          c.effect = operator_from_json(e);
        }
      }
    }
    c.validate();
    return c;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed circuit JSON: ") + e.what());
  }
}

}  // namespace magiclab::io
