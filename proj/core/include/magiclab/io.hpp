#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "magiclab/channels.hpp"
#include "magiclab/measures.hpp"
#include "magiclab/simulator.hpp"
#include "magiclab/synthesis.hpp"

namespace magiclab::io {

using Json = nlohmann::json;

/// x rounded to `digits` significant digits (used for every reported number).
double round_sig(double x, int digits = 12);

/// {"d", "n", "re": [[...]], "im": [[...]]}
Json to_json(const Operator& op);
Operator operator_from_json(const Json& j);
/// {"d", "n_in", "n_out", "values": [[...]]}, rows indexed by input point.
Json to_json(const WignerTable& table);
/// {"d", "n_in", "n_out", "choi": operator}
Json to_json(const Channel& channel);
Channel channel_from_json(const Json& j);

Json to_json(const PhasePoint& point);
Json to_json(const MeasureReport& report);
Json to_json(const CpwpResult& result);
Json to_json(const SynthesisBound& bound);
Json to_json(const ApproxBound& bound);
Json to_json(const EstimateResult& result);

Json load_json(const std::string& path);
/// Resolves `path` against `base_dir` unless it is absolute.
std::string resolve(const std::string& path, const std::string& base_dir);

/// Channel expression: constructor tokens joined by composition ("∘" or ".",
/// right factor applied first) and tensor ("⊗" or a whitespace-delimited "x",
/// binding tighter), with parentheses. Tokens: id, t, tdg, ccx, wh, f (or h),
/// s, csum, shift, clock, dep:p, deph:p0,p1,p2, utheta:angle (a number,
/// optionally suffixed by "pi"), unitary:file, choi:file, replacer:state.
Channel parse_channel(const std::string& expr, const std::string& base_dir = {});
/// Decimal number with an optional "pi" suffix ("1.5pi", "pi").
double parse_number(const std::string& text);

/// Library state name, or an operator JSON file ("file:path" or a path ending in .json).
Operator parse_state(const std::string& spec, const std::string& base_dir = {});
std::vector<std::string> channel_token_names();

/// {"d", "n", "initial": [...], "gates": [{"name" | "choi_file", "targets"}],
///  "measure": {"qudit" | "qudits", "effect": name | operator}}
Circuit circuit_from_json(const Json& j, const std::string& base_dir = {});

}  // namespace magiclab::io
