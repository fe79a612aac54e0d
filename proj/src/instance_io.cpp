#include "chp/instance_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"

namespace chp {

using nlohmann::json;

InstanceError::InstanceError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error([&] {
        std::string msg = "invalid instance";
        for (const auto& d : diagnostics) {
          if (d.severity == Severity::kError) msg += "\n  " + to_string(d);
        }
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return it.key() == k; });
    if (!known) throw ParseError("unknown field '" + it.key() + "' in " + where);
  }
}

const json& require(const json& obj, const std::string& where, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing field '" + std::string(key) + "' in " + where);
  return *it;
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError("field " + where + " must be a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError("field " + where + " must be an integer");
  return v.get<int>();
}

std::vector<double> as_numbers(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError("field " + where + " must be an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(as_number(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<PeriodCost> parse_cost(const json& v, const std::string& where, int horizon,
                                   double lo, double hi, int default_pieces) {
  std::vector<PeriodCost> out;
  if (v.is_array()) {
    for (std::size_t s = 0; s < v.size(); ++s) {
      const std::string at = where + "[" + std::to_string(s) + "]";
      if (!v[s].is_array()) throw ParseError("field " + at + " must be an array of pieces");
      PeriodCost pc;
      for (std::size_t j = 0; j < v[s].size(); ++j) {
        const std::string pat = at + "[" + std::to_string(j) + "]";
        const json& piece = v[s][j];
        if (!piece.is_object()) throw ParseError("field " + pat + " must be an object");
        reject_unknown(piece, pat, {"a", "b"});
        pc.pieces.push_back({as_number(require(piece, pat, "a"), pat + ".a"),
                             as_number(require(piece, pat, "b"), pat + ".b")});
      }
      out.push_back(std::move(pc));
    }
    return out;
  }
  if (!v.is_object()) throw ParseError("field " + where + " must be a list or {\"quadratic\": ...}");
  reject_unknown(v, where, {"quadratic"});
  const json& q = require(v, where, "quadratic");
  const std::string qat = where + ".quadratic";
  if (!q.is_object()) throw ParseError("field " + qat + " must be an object");
  reject_unknown(q, qat, {"alpha", "beta", "c", "pieces"});
  const double alpha = as_number(require(q, qat, "alpha"), qat + ".alpha");
  const double beta = as_number(require(q, qat, "beta"), qat + ".beta");
  const double c = as_number(require(q, qat, "c"), qat + ".c");
  const int pieces = q.contains("pieces") ? as_int(q["pieces"], qat + ".pieces") : default_pieces;
  if (pieces < 1) throw ParseError("field " + qat + ".pieces must be at least 1");
  if (alpha < 0.0) throw ParseError("field " + qat + ".alpha must be non-negative (convex cost)");
  const PeriodCost pc = tangent_pieces(alpha, beta, c, lo, hi, pieces);
  out.assign(std::max(horizon, 0), pc);
  return out;
}

GeneratorSpec parse_generator(const json& g, const std::string& where, int horizon, int default_pieces) {
  if (!g.is_object()) throw ParseError("field " + where + " must be an object");
  reject_unknown(g, where,
                 {"id", "L", "ell", "c_min", "c_max", "ramp", "start_ramp", "startup_cost",
                  "shutdown_cost", "initial", "cost"});
  GeneratorSpec gen;
  const json& id = require(g, where, "id");
  if (!id.is_string()) throw ParseError("field " + where + ".id must be a string");
  gen.id = id.get<std::string>();
  gen.min_up = as_int(require(g, where, "L"), where + ".L");
  gen.min_down = as_int(require(g, where, "ell"), where + ".ell");
  gen.c_min = as_number(require(g, where, "c_min"), where + ".c_min");
  gen.c_max = as_number(require(g, where, "c_max"), where + ".c_max");
  gen.ramp = as_number(require(g, where, "ramp"), where + ".ramp");
  gen.start_ramp = as_number(require(g, where, "start_ramp"), where + ".start_ramp");
  gen.startup_cost.values = as_numbers(require(g, where, "startup_cost"), where + ".startup_cost");
  gen.shutdown_cost.values = as_numbers(require(g, where, "shutdown_cost"), where + ".shutdown_cost");
  const json& init = require(g, where, "initial");
  const std::string iat = where + ".initial";
  if (!init.is_object() || init.size() != 1) {
    throw ParseError("field " + iat + " must be {\"on_for\": n} or {\"off_for\": n}");
  }
  reject_unknown(init, iat, {"on_for", "off_for"});
  if (init.contains("on_for")) {
    gen.initial = InitialState::OnFor(as_int(init["on_for"], iat + ".on_for"));
  } else {
    gen.initial = InitialState::OffFor(as_int(init["off_for"], iat + ".off_for"));
  }
  gen.cost = parse_cost(require(g, where, "cost"), where + ".cost", horizon, gen.c_min, gen.c_max,
                        default_pieces);
  return gen;
}

int line_of(const std::string& text, std::size_t byte) {
  const auto end = text.begin() + static_cast<std::ptrdiff_t>(std::min(byte, text.size()));
  return 1 + static_cast<int>(std::count(text.begin(), end, '\n'));
}

}  // namespace

LoadResult parse_instance(const std::string& text, const LoadOptions& options) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("JSON syntax error at line " + std::to_string(line_of(text, e.byte)) + ": " +
                     e.what());
  }
  if (!doc.is_object()) throw ParseError("instance document must be a JSON object");
  reject_unknown(doc, "instance", {"T", "demand", "generators"});
  LoadResult out;
  auto& inst = out.instance;
  inst.horizon = as_int(require(doc, "instance", "T"), "T");
  inst.demand = as_numbers(require(doc, "instance", "demand"), "demand");
  const json& gens = require(doc, "instance", "generators");
  if (!gens.is_array()) throw ParseError("field generators must be an array");
  for (std::size_t i = 0; i < gens.size(); ++i) {
    inst.generators.push_back(parse_generator(gens[i], "generators[" + std::to_string(i) + "]",
                                              inst.horizon, options.default_pieces));
  }
  out.diagnostics = validate(inst);
  if (!has_errors(out.diagnostics)) {
    // validate already reported dominated pieces; replace those warnings with
    // the removal record.
    std::erase_if(out.diagnostics, [](const Diagnostic& d) {
      return d.message.find("is dominated") != std::string::npos;
    });
    auto removed = remove_dominated_pieces(inst);
    out.diagnostics.insert(out.diagnostics.end(), removed.begin(), removed.end());
  }
  if (options.require_valid && has_errors(out.diagnostics)) throw InstanceError(out.diagnostics);
  return out;
}

LoadResult load_instance_file(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str(), options);
}

SystemInstance load_instance(const std::string& path, const LoadOptions& options) {
  return load_instance_file(path, options).instance;
}

std::string instance_to_json(const SystemInstance& instance) {
  json doc;
  doc["T"] = instance.horizon;
  doc["demand"] = instance.demand;
  doc["generators"] = json::array();
  for (const auto& g : instance.generators) {
    json jg;
    jg["id"] = g.id;
    jg["L"] = g.min_up;
    jg["ell"] = g.min_down;
    jg["c_min"] = g.c_min;
    jg["c_max"] = g.c_max;
    jg["ramp"] = g.ramp;
    jg["start_ramp"] = g.start_ramp;
    jg["startup_cost"] = g.startup_cost.values;
    jg["shutdown_cost"] = g.shutdown_cost.values;
    jg["initial"] = g.initial.is_on() ? json{{"on_for", g.initial.periods}}
                                      : json{{"off_for", g.initial.periods}};
    json cost = json::array();
    for (const auto& pc : g.cost) {
      json period = json::array();
      for (const auto& p : pc.pieces) period.push_back({{"a", p.slope}, {"b", p.intercept}});
      cost.push_back(std::move(period));
    }
    jg["cost"] = std::move(cost);
    doc["generators"].push_back(std::move(jg));
  }
  return doc.dump(2);
}

void save_instance(const SystemInstance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file " + path);
  out << instance_to_json(instance) << '\n';
}

}  // namespace chp
