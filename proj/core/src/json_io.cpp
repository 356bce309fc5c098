#include "lamebethe/json_io.hpp"

#include "lamebethe/errors.hpp"

namespace lamebethe {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    fail(ErrorCode::InvalidInput, std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

std::vector<Complex> complex_list(const Json& j, const char* what) {
  if (!j.is_array()) fail(ErrorCode::InvalidInput, std::string(what) + " must be an array");
  std::vector<Complex> out;
  for (const auto& v : j) out.push_back(complex_from_json(v));
  return out;
}

Json exact_poly_json(const Poly<GaussianRational>& p) {
  Json out = Json::array();
  for (const auto& c : p.coeffs()) out.push_back(Json::array({c.to_complex().real(), c.to_complex().imag()}));
  return out;
}

}  // namespace

Complex complex_from_json(const Json& j) {
  try {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
      return {j[0].get<double>(), j[1].get<double>()};
    }
    if (j.is_object() && j.contains("re")) {
      return {j.at("re").get<double>(), j.value("im", 0.0)};
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::InvalidInput, e.what());
  }
  fail(ErrorCode::InvalidInput, "expected a complex number, got " + j.dump());
}

// + 0.0 folds negative zeros
Json to_json(Complex v) { return Json::array({v.real() + 0.0, v.imag() + 0.0}); }

Json to_json(const std::vector<Complex>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_json(x));
  return out;
}

WeightSystem weight_system_from_json(const Json& j) {
  const auto z = complex_list(field(j, "z"), "z");
  std::vector<WeightRow> m;
  int r = 0;
  if (j.contains("classical_m")) {
    r = 1;
    for (const auto& ms : complex_list(j.at("classical_m"), "classical_m")) {
      m.push_back({Complex{}, -ms});
    }
  } else {
    const Json& mj = field(j, "m");
    if (!mj.is_array()) fail(ErrorCode::InvalidInput, "m must be a matrix");
    for (const auto& row : mj) m.push_back(complex_list(row, "m row"));
    if (j.contains("r")) {
      if (!j.at("r").is_number_integer()) fail(ErrorCode::InvalidInput, "r must be an integer");
      r = j.at("r").get<int>();
    } else {
      r = m.empty() ? 0 : static_cast<int>(m.front().size()) - 1;
    }
  }
  std::vector<int> l;
  if (!j.contains("l") && j.contains("m_inf")) {
    // l recovered from the weight at infinity
    const auto m_inf = complex_list(j.at("m_inf"), "m_inf");
    l = admissible_from_sequences(m, m_inf).entries;
    return WeightSystem::make(r, z, m, l);
  }
  const Json& lj = field(j, "l");
  if (lj.is_number_integer()) {
    l.push_back(lj.get<int>());
  } else if (lj.is_array()) {
    for (const auto& v : lj) {
      if (!v.is_number_integer()) fail(ErrorCode::InvalidInput, "l entries must be integers");
      l.push_back(v.get<int>());
    }
  } else {
    fail(ErrorCode::InvalidInput, "l must be an integer list");
  }
  return WeightSystem::make(r, z, m, l);
}

Json to_json(const WeightSystem& ws) {
  Json m = Json::array();
  for (const auto& row : ws.m()) m.push_back(to_json(row));
  return {{"r", ws.rank()},
          {"n", ws.n()},
          {"z", to_json(ws.z())},
          {"m", m},
          {"l", ws.l().entries},
          {"m_inf", to_json(ws.m_inf())}};
}

Coords coords_from_json(const Json& j) {
  const Json* src = &j;
  if (j.is_object()) {
    if (j.contains("coords")) {
      src = &j.at("coords");
    } else if (j.contains("t")) {
      src = &j.at("t");
    } else {
      fail(ErrorCode::InvalidInput, "orbit needs \"coords\"");
    }
  }
  if (!src->is_array()) fail(ErrorCode::InvalidInput, "coords must be a list of color groups");
  Coords t;
  for (const auto& group : *src) t.push_back(complex_list(group, "color group"));
  return t;
}

Json coords_to_json(const Coords& t) {
  Json out = Json::array();
  for (const auto& group : t) out.push_back(to_json(group));
  return out;
}

Json to_json(const CriticalPoint& cp) {
  return {{"coords", coords_to_json(cp.coords)},
          {"residual_norm", cp.residual_norm},
          {"degenerate", cp.degenerate},
          {"multiplicity", cp.degenerate ? Json(">=2 (undetermined)") : Json(1)},
          {"canonical_key", cp.canonical_key}};
}

Json to_json(const SearchLog& log) {
  return {{"attempted", log.attempted},
          {"converged", log.converged},
          {"rejected_duplicate", log.rejected_duplicate},
          {"rejected_invariant", log.rejected_invariant},
          {"diverged", log.diverged}};
}

Json to_json(const OrbitSet& set) {
  Json orbits = Json::array();
  for (const auto& cp : set.orbits) orbits.push_back(to_json(cp));
  Json bound = set.bound.fits_ulong_p() ? Json(set.bound.get_ui()) : Json(set.bound.get_str());
  return {{"orbits", orbits},
          {"count", set.orbits.size()},
          {"bound", bound},
          {"saturated", set.saturated},
          {"separating", set.separating},
          {"search_log", to_json(set.search_log)},
          {"warnings", set.warnings}};
}

Json to_json(const Poly<Complex>& p) { return to_json(p.coeffs()); }

Json to_json(const RationalFn<Complex>& f) {
  return {{"num", to_json(f.num())}, {"den", to_json(f.den())}};
}

Json to_json(const FloatOp& op) {
  Json factors = Json::array();
  Json coeffs = Json::array();
  for (const auto& g : op.factors) factors.push_back(to_json(g));
  for (const auto& a : op.coeffs) coeffs.push_back(to_json(a));
  return {{"order", op.order}, {"exact", false}, {"factors", factors}, {"coeffs", coeffs}};
}

Json to_json(const ExactOp& op) {
  Json factors = Json::array();
  Json coeffs = Json::array();
  for (const auto& g : op.factors) {
    factors.push_back({{"num", exact_poly_json(g.num())}, {"den", exact_poly_json(g.den())}});
  }
  for (const auto& a : op.coeffs) {
    coeffs.push_back({{"num", exact_poly_json(a.num())}, {"den", exact_poly_json(a.den())}});
  }
  return {{"order", op.order}, {"exact", true}, {"factors", factors}, {"coeffs", coeffs}};
}

Json to_json(const ExponentProfile& profile) {
  Json out = Json::object();
  for (std::size_t s = 0; s < profile.finite.size(); ++s) {
    out["z" + std::to_string(s)] = to_json(profile.finite[s]);
  }
  out["inf"] = to_json(profile.infinity);
  return out;
}

Json to_json(const ExponentComparison& cmp) {
  Json checks = Json::array();
  for (const auto& c : cmp.checks) {
    checks.push_back({{"point", c.point},
                      {"expected", to_json(c.expected)},
                      {"found", to_json(c.found)},
                      {"distance", c.distance},
                      {"coefficient_gap", c.coefficient_gap},
                      {"exact", c.exact},
                      {"ok", c.ok}});
  }
  return {{"checks", checks}, {"ok", cmp.ok}};
}

Json to_json(const FlagWitness& w) {
  return {{"center", to_json(w.disc.center)},
          {"radius", w.disc.radius},
          {"samples", to_json(w.disc.points)},
          {"wronskian_residuals", w.wronskian_residuals},
          {"solution_residuals", w.solution_residuals},
          {"factored_residuals", w.factored_residuals},
          {"worst", w.worst},
          {"ok", w.ok}};
}

Json to_json(const TildeReport& rep) {
  return {{"residuals", rep.residuals},
          {"probe_max", rep.probe_max},
          {"bounded", rep.bounded},
          {"worst", rep.worst},
          {"ok", rep.ok}};
}

Json to_json(const VanVleck& vv) {
  return {{"F", to_json(vv.F)},
          {"G", to_json(vv.G)},
          {"H", to_json(vv.H)},
          {"remainder_norm", vv.remainder_norm},
          {"remainder_absolute", vv.remainder_absolute},
          {"normalization", "monic F = prod (x - z_s)"}};
}

}  // namespace lamebethe
