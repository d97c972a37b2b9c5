// InequalityReport: the uniform result record for every named condition
// checked by the library, plus deterministic JSON/CSV emission.
#pragma once

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphcalc/common.hpp"

namespace graphcalc {

enum class Verdict { PASS, FAIL, ESTIMATE };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::PASS: return "PASS";
    case Verdict::FAIL: return "FAIL";
    case Verdict::ESTIMATE: return "ESTIMATE";
  }
  return "?";
}

enum class Method { ExactSpectral, RayleighAscent, RandomSample, Enumeration };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::ExactSpectral: return "exact-spectral";
    case Method::RayleighAscent: return "rayleigh-ascent";
    case Method::RandomSample: return "random-sample";
    case Method::Enumeration: return "enumeration";
  }
  return "?";
}

struct NamedConstant {
  std::string name;
  double value = 0.0;
  Method method = Method::Enumeration;
  std::string provenance;  // how the number was obtained
};

// A flat table of grid rows for plot-ready CSV output.
struct GridTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(const std::vector<double>& r) { rows.push_back(r); }
};

struct InequalityReport {
  std::string condition;
  std::map<std::string, double> params;
  std::vector<NamedConstant> constants;
  std::string witness_id;
  Verdict verdict = Verdict::ESTIMATE;
  std::vector<std::string> notes;
  GridTable grid;

  void add_constant(const std::string& name, double value, Method method,
                    const std::string& provenance) {
    constants.push_back({name, value, method, provenance});
  }
  void add_note(const std::string& n) { notes.push_back(n); }
  const NamedConstant& constant(const std::string& name) const {
    for (const auto& c : constants)
      if (c.name == name) return c;
    fail(ErrorCode::BadInput, "no constant named " + name + " in report " + condition);
  }
  bool has_constant(const std::string& name) const {
    for (const auto& c : constants)
      if (c.name == name) return true;
    return false;
  }
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

// Deterministic JSON text: keys sorted (nlohmann object is a std::map) and
// every floating-point number rendered as %.12e.
inline void dump_deterministic(const nlohmann::json& j, std::string& out, int indent,
                               int level) {
  const std::string pad(static_cast<size_t>(indent) * level, ' ');
  const std::string padc(static_cast<size_t>(indent) * (level + 1), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      size_t k = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++k) {
        out += padc;
        out += nlohmann::json(it.key()).dump();
        out += ": ";
        dump_deterministic(it.value(), out, indent, level + 1);
        if (k + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (size_t k = 0; k < j.size(); ++k) {
        out += padc;
        dump_deterministic(j[k], out, indent, level + 1);
        if (k + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

inline std::string dump_deterministic(const nlohmann::json& j) {
  std::string out;
  dump_deterministic(j, out, 2, 0);
  out += "\n";
  return out;
}

inline nlohmann::json report_to_json(const InequalityReport& r) {
  nlohmann::json j;
  j["condition"] = r.condition;
  j["verdict"] = verdict_name(r.verdict);
  j["witness"] = r.witness_id;
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["params"] = params;
  nlohmann::json consts = nlohmann::json::array();
  for (const auto& c : r.constants) {
    nlohmann::json cj;
    cj["name"] = c.name;
    cj["value"] = c.value;
    cj["method"] = method_name(c.method);
    cj["provenance"] = c.provenance;
    consts.push_back(cj);
  }
  j["constants"] = consts;
  j["notes"] = r.notes;
  return j;
}

inline std::string grid_to_csv(const std::string& check, const GridTable& g) {
  std::string out = "# graphcalc-csv schema=1 check=" + check + "\n";
  for (size_t i = 0; i < g.columns.size(); ++i) {
    if (i) out += ",";
    out += g.columns[i];
  }
  out += "\n";
  for (const auto& row : g.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += format_double(row[i]);
    }
    out += "\n";
  }
  return out;
}

}  // namespace graphcalc
