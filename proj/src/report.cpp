#include <fstream>

#include "curvelink/json_io.hpp"

namespace curvelink {

namespace {

double number_at(const nlohmann::json& j, const std::string& field) {
  if (!j.contains(field) || !j[field].is_number())
    throw SchemaError("curve spec: missing or non-numeric field '" + field +
                      "'");
  return j[field].get<double>();
}

void parse_harmonics(const nlohmann::json& table, const std::string& which,
                     int coord_index, TrigCoord& coord) {
  if (!table.is_object())
    throw SchemaError("curve spec: coords[" + std::to_string(coord_index) +
                      "]." + which + " must be an object");
  for (const auto& [key, value] : table.items()) {
    int k = 0;
    try {
      std::size_t pos = 0;
      k = std::stoi(key, &pos);
      if (pos != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw SchemaError("curve spec: coords[" + std::to_string(coord_index) +
                        "]." + which + " key '" + key +
                        "' is not an integer harmonic index");
    }
    if (k < 1 || !value.is_number())
      throw SchemaError("curve spec: coords[" + std::to_string(coord_index) +
                        "]." + which + "['" + key + "'] is invalid");
    if (which == "cos")
      coord.add_cos(k, value.get<double>());
    else
      coord.add_sin(k, value.get<double>());
  }
}

}  // namespace

TrigCurve curve_from_json(const nlohmann::json& spec) {
  if (!spec.is_object()) throw SchemaError("curve spec must be a JSON object");
  if (spec.contains("preset")) {
    if (!spec["preset"].is_string())
      throw SchemaError("curve spec: 'preset' must be a string");
    return from_preset(spec["preset"].get<std::string>(),
                       number_at(spec, "A"));
  }
  if (!spec.contains("dim") || !spec["dim"].is_number_integer())
    throw SchemaError("curve spec: missing integer field 'dim'");
  const int dim = spec["dim"].get<int>();
  if (dim < 3) throw SchemaError("curve spec: 'dim' must be >= 3");
  if (!spec.contains("coords") || !spec["coords"].is_array() ||
      static_cast<int>(spec["coords"].size()) != dim)
    throw SchemaError("curve spec: 'coords' must be an array of length dim");
  TrigCurve curve(dim);
  for (int i = 0; i < dim; ++i) {
    const nlohmann::json& cj = spec["coords"][i];
    if (!cj.is_object())
      throw SchemaError("curve spec: coords[" + std::to_string(i) +
                        "] must be an object");
    if (cj.contains("const")) curve.coord(i).c0 = number_at(cj, "const");
    if (cj.contains("cos")) parse_harmonics(cj["cos"], "cos", i, curve.coord(i));
    if (cj.contains("sin")) parse_harmonics(cj["sin"], "sin", i, curve.coord(i));
  }
  return curve;
}

nlohmann::json curve_to_json(const TrigCurve& curve) {
  nlohmann::json coords = nlohmann::json::array();
  for (int i = 0; i < curve.dim(); ++i) {
    nlohmann::json cj;
    cj["const"] = curve.coord(i).c0;
    nlohmann::json cos_j = nlohmann::json::object();
    nlohmann::json sin_j = nlohmann::json::object();
    for (const TrigCoord::Harmonic& h : curve.coord(i).harmonics) {
      if (h.a != 0.0) cos_j[std::to_string(h.k)] = h.a;
      if (h.b != 0.0) sin_j[std::to_string(h.k)] = h.b;
    }
    cj["cos"] = cos_j;
    cj["sin"] = sin_j;
    coords.push_back(cj);
  }
  return {{"dim", curve.dim()}, {"coords", coords}};
}

TrigCurve load_curve(const std::string& arg) {
  if (arg.rfind("preset:", 0) == 0) {
    const std::string rest = arg.substr(7);
    const std::size_t q = rest.find('?');
    const std::string name = rest.substr(0, q);
    double a_value = 1.0;
    if (q != std::string::npos) {
      const std::string query = rest.substr(q + 1);
      if (query.rfind("A=", 0) != 0)
        throw SchemaError("preset spec '" + arg + "': expected ?A=<value>");
      try {
        a_value = std::stod(query.substr(2));
      } catch (const std::exception&) {
        throw SchemaError("preset spec '" + arg + "': bad A value");
      }
    }
    return from_preset(name, a_value);
  }
  std::ifstream in(arg);
  if (!in) throw SchemaError("cannot open curve file '" + arg + "'");
  nlohmann::json spec;
  try {
    spec = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("curve file '" + arg + "': " + e.what());
  }
  return curve_from_json(spec);
}

nlohmann::json to_json(const RegularityReport& rep) {
  return {{"k", rep.k},
          {"grid", rep.grid},
          {"pass", rep.pass},
          {"condition1_margin", rep.condition1_margin},
          {"condition1_worst", {rep.condition1_t, rep.condition1_s}},
          {"band_margin", rep.band_margin},
          {"band_worst", {rep.band_t, rep.band_s}},
          {"condition2a_margin", rep.condition2a_margin},
          {"condition2b_max", rep.condition2b_max},
          {"condition2c_margin", rep.condition2c_margin},
          {"tolerances",
           {{"condition1", rep.tol_condition1},
            {"band", rep.tol_band},
            {"condition2a", rep.tol_2a},
            {"condition2b", rep.tol_2b},
            {"condition2c", rep.tol_2c}}}};
}

nlohmann::json to_json(const InvariantResult& result) {
  return {{"raw", result.raw},
          {"value", result.value},
          {"residual", result.residual},
          {"method", method_name(result.method)},
          {"diagnostics", result.diagnostics}};
}

nlohmann::json to_json(const IntersectionRecord& record) {
  std::vector<double> coords(
      record.fiber_coords.data(),
      record.fiber_coords.data() + record.fiber_coords.size());
  return {{"t", record.t},
          {"s", record.s},
          {"fiber_coords", coords},
          {"sign_factor", record.sign_factor},
          {"index", record.index},
          {"contribution", record.contribution}};
}

}  // namespace curvelink
