#include "config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zbw/errors.hpp"
#include "zbw/spinor.hpp"

namespace zbw::cli {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

double number(const json& j, const std::string& key) {
  if (!j.is_number()) fail(key, "expected a number");
  return j.get<double>();
}

double require_number(const json& obj, const char* name, const std::string& path) {
  if (!obj.contains(name)) fail(path, "missing required field");
  return number(obj.at(name), path);
}

double optional_number(const json& obj, const char* name, const std::string& path, double fallback) {
  if (!obj.contains(name)) return fallback;
  return number(obj.at(name), path);
}

template <std::size_t N>
std::array<double, N> numbers(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != N) fail(key, "expected an array of " + std::to_string(N) + " numbers");
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) out[i] = number(j[i], key + "[" + std::to_string(i) + "]");
  return out;
}

FieldSpec parse_field(const json& j) {
  FieldSpec f;
  if (!j.is_object()) fail("field", "expected an object");
  if (!j.contains("kind")) fail("field.kind", "missing required field");
  const json& kind = j.at("kind");
  if (!kind.is_string()) fail("field.kind", "expected a string");
  const std::string k = kind.get<std::string>();
  const json params = j.value("params", json::object());
  if (k == "free") {
    f.kind = FieldKind::free;
  } else if (k == "constant") {
    f.kind = FieldKind::constant;
    if (!params.contains("F")) fail("field.params.F", "missing required field");
    f.F = Multivector::bivector(numbers<6>(params.at("F"), "field.params.F"));
  } else if (k == "polynomial") {
    f.kind = FieldKind::polynomial;
    if (!params.contains("terms") || !params.at("terms").is_array()) {
      fail("field.params.terms", "expected an array of terms");
    }
    std::size_t i = 0;
    for (const auto& t : params.at("terms")) {
      const std::string key = "field.params.terms[" + std::to_string(i++) + "]";
      PolynomialTerm term;
      const double c = require_number(t, "component", key + ".component");
      if (c != std::floor(c) || c < 0 || c > 3) fail(key + ".component", "must be an integer 0..3");
      term.component = static_cast<int>(c);
      term.coefficient = require_number(t, "coefficient", key + ".coefficient");
      if (t.contains("powers")) {
        const auto p = numbers<4>(t.at("powers"), key + ".powers");
        for (int mu = 0; mu < 4; ++mu) {
          if (p[mu] != std::floor(p[mu]) || p[mu] < 0) fail(key + ".powers", "must be non-negative integers");
          term.powers[mu] = static_cast<int>(p[mu]);
        }
      }
      f.terms.push_back(term);
    }
  } else {
    fail("field.kind", "unknown kind '" + k + "' (free, constant, polynomial)");
  }
  return f;
}

InitialCondition parse_init(const json& j) {
  InitialCondition ic;
  if (!j.is_object()) fail("init", "expected an object");
  if (!j.contains("kind")) fail("init.kind", "missing required field");
  if (!j.at("kind").is_string()) fail("init.kind", "expected a string");
  const std::string k = j.at("kind").get<std::string>();
  const json v = j.value("values", json::object());
  if (!v.is_object()) fail("init.values", "expected an object");

  if (k == "z") {
    ic.kind = InitialCondition::Kind::z;
    if (!v.contains("z")) fail("init.values.z", "missing required field");
    const json& z = v.at("z");
    if (!z.is_array() || z.size() != 4) fail("init.values.z", "expected four [re, im] pairs");
    for (std::size_t a = 0; a < 4; ++a) {
      const auto c = numbers<2>(z[a], "init.values.z[" + std::to_string(a) + "]");
      ic.z.z[a] = {c[0], c[1]};
    }
  } else if (k == "rotor") {
    ic.kind = InitialCondition::Kind::rotor;
    ic.rho = optional_number(v, "rho", "init.values.rho", 1.0);
    ic.beta = optional_number(v, "beta", "init.values.beta", 0.0);
    if (v.contains("rotor") && v.contains("generator")) {
      fail("init.values", "give either rotor or generator, not both");
    }
    if (v.contains("rotor")) {
      ic.rotor = DHSpinor::from_components(numbers<8>(v.at("rotor"), "init.values.rotor")).value();
    } else if (v.contains("generator")) {
      ic.rotor = exp_bivector(Multivector::bivector(numbers<6>(v.at("generator"), "init.values.generator")));
    }
  } else {
    fail("init.kind", "unknown kind '" + k + "' (z, rotor)");
  }

  if (v.contains("x")) ic.x = Multivector::vector(numbers<4>(v.at("x"), "init.values.x"));
  if (v.contains("pi")) {
    ic.has_pi = true;
    ic.pi = Multivector::vector(numbers<4>(v.at("pi"), "init.values.pi"));
  }
  if (v.contains("normalize")) {
    const json& n = v.at("normalize");
    if (!n.is_string() || (n != "H" && n != "none")) fail("init.values.normalize", "expected \"H\" or \"none\"");
    ic.normalize_energy = n == "H";
  }
  return ic;
}

int line_of(const std::string& text, std::size_t byte, int& column) {
  int line = 1;
  column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return line;
}

json vec_json(const Multivector& a) {
  const auto v = a.vector_part();
  return json::array({v[0], v[1], v[2], v[3]});
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& default_name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    int column = 0;
    const int line = line_of(text, e.byte == 0 ? 0 : e.byte - 1, column);
    throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(column) +
                      ": malformed JSON");
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  ScenarioConfig cfg;
  cfg.name = default_name;
  if (j.contains("name")) {
    if (!j.at("name").is_string()) fail("name", "expected a string");
    cfg.name = j.at("name").get<std::string>();
  }
  cfg.m = require_number(j, "m", "m");
  if (!(cfg.m > 0.0)) fail("m", "mass must be positive");
  const ScenarioConfig defaults = default_scenario(cfg.m);
  cfg.e = optional_number(j, "e", "e", 0.0);
  if (j.contains("field")) cfg.field = parse_field(j.at("field"));
  if (!j.contains("init")) fail("init", "missing required field");
  cfg.init = parse_init(j.at("init"));
  cfg.tau_end = optional_number(j, "tau_end", "tau_end", defaults.tau_end);
  cfg.step = optional_number(j, "step", "step", defaults.step);
  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    if (!o.is_object()) fail("outputs", "expected an object");
    const double s = optional_number(o, "stride", "outputs.stride", 1.0);
    if (s != std::floor(s) || s < 1) fail("outputs.stride", "must be a positive integer");
    cfg.stride = static_cast<std::size_t>(s);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::filesystem::path(path).stem().string());
}

json config_to_json(const ScenarioConfig& cfg) {
  json field;
  switch (cfg.field.kind) {
    case FieldKind::free:
      field = {{"kind", "free"}};
      break;
    case FieldKind::constant: {
      const auto b = cfg.field.F.bivector_part();
      field = {{"kind", "constant"}, {"params", {{"F", b}}}};
      break;
    }
    case FieldKind::polynomial: {
      json terms = json::array();
      for (const auto& t : cfg.field.terms) {
        terms.push_back({{"component", t.component}, {"coefficient", t.coefficient}, {"powers", t.powers}});
      }
      field = {{"kind", "polynomial"}, {"params", {{"terms", terms}}}};
      break;
    }
  }

  json values;
  if (cfg.init.kind == InitialCondition::Kind::z) {
    json z = json::array();
    for (const auto& c : cfg.init.z.z) z.push_back({c.real(), c.imag()});
    values["z"] = z;
  } else {
    values["rho"] = cfg.init.rho;
    values["beta"] = cfg.init.beta;
    values["rotor"] = DHSpinor(cfg.init.rotor).components();
  }
  values["x"] = vec_json(cfg.init.x);
  if (cfg.init.has_pi) values["pi"] = vec_json(cfg.init.pi);
  values["normalize"] = cfg.init.normalize_energy ? "H" : "none";

  return {{"name", cfg.name},
          {"m", cfg.m},
          {"e", cfg.e},
          {"field", field},
          {"init", {{"kind", cfg.init.kind == InitialCondition::Kind::z ? "z" : "rotor"}, {"values", values}}},
          {"tau_end", cfg.tau_end},
          {"step", cfg.step},
          {"outputs", {{"stride", cfg.stride}}}};
}

}  // namespace zbw::cli
