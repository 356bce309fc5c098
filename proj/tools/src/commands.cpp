#include "lamebethe_cli/commands.hpp"

#include <chrono>
#include <new>
#include <sstream>

#include <lamebethe/master.hpp>
#include <lamebethe/polytuple.hpp>
#include <lamebethe/rootdata.hpp>
#include <lamebethe/solver.hpp>
#include <lamebethe/verify.hpp>

namespace lamebethe::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Json bignum(const mpz_class& v) {
  if (v.fits_ulong_p()) return Json(v.get_ui());
  return Json(v.get_str());
}

mpz_class orbit_bound(const WeightSystem& ws, const Caps& caps) {
  if (ws.n() < 2) return ws.total_l() == 0 ? 1 : 0;
  return d_dimension(ws.n() - 1, ws.rank(), ws.l(), caps);
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string orbit_table(const OrbitSet& set) {
  std::ostringstream os;
  os << "index,residual_norm,multiplicity,canonical_key,coords\n";
  os.precision(17);
  for (std::size_t k = 0; k < set.orbits.size(); ++k) {
    const auto& cp = set.orbits[k];
    os << k << ',' << cp.residual_norm << ',' << (cp.degenerate ? ">=2" : "1") << ','
       << csv_quote(cp.canonical_key) << ',' << csv_quote(coords_to_json(cp.coords).dump())
       << '\n';
  }
  return os.str();
}

SolveOptions solve_options(const RunOptions& o) {
  SolveOptions s;
  s.tol = o.tol;
  s.quantum = o.quantum;
  s.caps = o.caps;
  return s;
}

// The orbit inside a critical point, an OrbitSet or a solve report.
Coords pick_orbit(const Json& doc, int index) {
  const Json* set = nullptr;
  if (doc.is_object() && doc.contains("orbits")) set = &doc;
  if (doc.is_object() && doc.contains("result") && doc.at("result").contains("orbits")) {
    set = &doc.at("result");
  }
  if (!set) return coords_from_json(doc);
  const Json& orbits = set->at("orbits");
  if (!orbits.is_array() || index < 0 || index >= static_cast<int>(orbits.size())) {
    fail(ErrorCode::InvalidInput, "orbit index " + std::to_string(index) + " out of range");
  }
  return coords_from_json(orbits[index]);
}

Json exponent_section(const WeightSystem& ws, const PolyTuple& y, bool exact, bool& ok) {
  Json out;
  ExponentComparison fundamental;
  ExponentComparison conjugated;
  if (exact) {
    const auto op = build_fundamental<GaussianRational>(ws, y);
    fundamental = compare_exponents(ws, op, ExponentKind::Fundamental);
    conjugated = compare_exponents(ws, conjugate_by_t1(ws, op), ExponentKind::Conjugated);
  } else {
    const auto op = build_fundamental<Complex>(ws, y);
    fundamental = compare_exponents(ws, op, ExponentKind::Fundamental);
    conjugated = compare_exponents(ws, conjugate_by_t1(ws, op), ExponentKind::Conjugated);
  }
  const auto audit = audit_poles(ws, build_fundamental<Complex>(ws, y));
  out["fundamental"] = to_json(fundamental);
  out["conjugated"] = to_json(conjugated);
  out["pole_audit"] = {{"worst_relative", audit.worst_relative}, {"ok", audit.ok}};
  ok = ok && fundamental.ok && conjugated.ok && audit.ok;
  return out;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput:
    case ErrorCode::NonAdmissible:
    case ErrorCode::NotClassicalCase:
    case ErrorCode::ZeroInput:
      return kExitInvalid;
    case ErrorCode::ResourceLimit:
      return kExitResource;
    default:
      return kExitVerification;
  }
}

Caps parse_caps(const std::string& text) {
  Caps caps;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) fail(ErrorCode::InvalidInput, "caps entry without '=': " + item);
    const std::string key = item.substr(0, eq);
    std::uint64_t value = 0;
    try {
      std::size_t used = 0;
      value = std::stoull(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      fail(ErrorCode::InvalidInput, "caps value is not a count: " + item);
    }
    if (key == "separating") {
      caps.separating = value;
    } else if (key == "compositions") {
      caps.compositions = value;
    } else {
      fail(ErrorCode::InvalidInput, "unknown caps key: " + key);
    }
  }
  return caps;
}

Arithmetic parse_arithmetic(const std::string& text) {
  if (text == "auto") return Arithmetic::Auto;
  if (text == "exact") return Arithmetic::Exact;
  if (text == "float") return Arithmetic::Float;
  fail(ErrorCode::InvalidInput, "arithmetic must be auto, exact or float");
}

CommandOutput cmd_count(const Json& ws_doc, const RunOptions& options) {
  const auto start = Clock::now();
  const auto ws = weight_system_from_json(ws_doc);
  CommandOutput out;
  auto& rep = out.report;
  rep["command"] = "count";
  rep["ws"] = to_json(ws);
  rep["d"] = bignum(orbit_bound(ws, options.caps));
  const auto sep = is_separating(ws, options.caps);
  rep["separating"] = sep.separating;
  if (!sep.separating) {
    rep["witness"] = {{"c", sep.witness}, {"value", to_json(sep.value)}};
  }
  // sl2 count only makes sense for dominant integral r = 1 data
  if (ws.rank() == 1) {
    bool integral = is_dominant_integral(ws.m_inf());
    for (const auto& row : ws.m()) integral = integral && is_dominant_integral(row);
    if (integral) {
      std::vector<int> ms;
      for (int s = 0; s < ws.n(); ++s) ms.push_back(static_cast<int>(*as_integer(ws.pairing(s, 0))));
      const int m_inf = static_cast<int>(*as_integer(ws.inf_pairing(0)));
      rep["sl2_delta"] = bignum(sl2_multiplicity(ms, m_inf));
    }
  }
  rep["elapsed_seconds"] = seconds_since(start);
  return out;
}

CommandOutput cmd_solve(const Json& ws_doc, const RunOptions& options) {
  const auto start = Clock::now();
  const auto ws = weight_system_from_json(ws_doc);
  const auto opts = solve_options(options);
  const OrbitSet set = options.real_classical
                           ? solve_stieltjes_real(ws, opts)
                           : solve_multistart(ws, options.starts, options.seed, opts);
  CommandOutput out;
  auto& rep = out.report;
  rep["command"] = "solve";
  rep["method"] = options.real_classical ? "stieltjes" : "multistart";
  rep["input"] = ws_doc;
  rep["ws"] = to_json(ws);
  rep["seed"] = options.seed;
  rep["starts"] = options.starts;
  rep["tol"] = options.tol;
  rep["quantum"] = options.quantum;
  rep["result"] = to_json(set);
  rep["elapsed_seconds"] = seconds_since(start);
  if (options.csv) out.table = orbit_table(set);
  return out;
}

CommandOutput cmd_verify(const Json& ws_doc, const Json& orbit_doc, const RunOptions& options) {
  const auto start = Clock::now();
  const auto ws = weight_system_from_json(ws_doc);
  const auto& level = options.level;
  if (level != "all" && level != "flag" && level != "tilde" && level != "exponents") {
    fail(ErrorCode::InvalidInput, "level must be all, flag, tilde or exponents");
  }
  const Coords t = pick_orbit(orbit_doc, options.orbit_index);
  check_shape(ws, t);

  CommandOutput out;
  auto& rep = out.report;
  rep["command"] = "verify";
  rep["level"] = level;
  rep["ws"] = to_json(ws);
  rep["coords"] = coords_to_json(t);

  const auto audit = check_off_diagonal(ws, t);
  if (!audit.ok) {
    rep["ok"] = false;
    rep["error"] = "OffDiagonalViolation";
    rep["clause"] = audit.clause;
    rep["detail"] = audit.detail;
    rep["elapsed_seconds"] = seconds_since(start);
    out.exit_code = kExitVerification;
    return out;
  }
  const auto residual = bae_residual(ws, t);
  const double norm = max_norm(residual);
  rep["residual_norm"] = norm;
  if (norm > options.tol) {
    rep["ok"] = false;
    rep["error"] = "NotCritical";
    rep["residuals"] = to_json(residual);
    rep["elapsed_seconds"] = seconds_since(start);
    out.exit_code = kExitVerification;
    return out;
  }

  const auto y = PolyTuple::from_coords(t);
  const bool exact = prefer_exact(ws, options.arithmetic);
  rep["arithmetic"] = exact ? "exact" : "float";
  bool ok = true;
  Json checks;

  if (level == "all" || level == "exponents") {
    checks["exponents"] = exponent_section(ws, y, exact, ok);
  }

  if (level != "exponents") {
    FlagOptions fo;
    fo.tol = options.identity_tol;
    const auto op = build_fundamental<Complex>(ws, y);
    const auto flag = evaluate_flag(ws, y, op, fo);
    if (level == "all" || level == "flag") {
      checks["flag"] = to_json(flag);
      ok = ok && flag.ok;
    }
    if (level == "all" || level == "tilde") {
      const auto tilde = evaluate_tilde_identities(ws, y, flag, options.identity_tol);
      checks["tilde"] = to_json(tilde);
      ok = ok && tilde.ok;
    }
  }

  if (level == "all") {
    // critical point -> operator -> roots -> certify
    const auto op = build_fundamental<Complex>(ws, y);
    const PolyTuple back{op.form->polys};
    const auto cp = operator_to_critical_point(ws, back, options.tol, options.quantum);
    const auto key = canonicalize(t, options.quantum);
    const bool same = cp.canonical_key == key;
    checks["round_trip"] = {{"canonical_key", key},
                            {"recovered_key", cp.canonical_key},
                            {"residual_norm", cp.residual_norm},
                            {"ok", same}};
    ok = ok && same;
  }

  rep["checks"] = checks;
  rep["ok"] = ok;
  rep["elapsed_seconds"] = seconds_since(start);
  out.exit_code = ok ? kExitOk : kExitVerification;
  return out;
}

CommandOutput cmd_classical(const Json& ws_doc, const RunOptions& options) {
  const auto start = Clock::now();
  const auto ws = weight_system_from_json(ws_doc);
  const auto set = solve_stieltjes_real(ws, solve_options(options));

  mpz_class expected;
  const int l = ws.total_l();
  mpz_bin_uiui(expected.get_mpz_t(), static_cast<unsigned long>(l + ws.n() - 2),
               static_cast<unsigned long>(l));

  CommandOutput out;
  auto& rep = out.report;
  rep["command"] = "classical";
  rep["ws"] = to_json(ws);
  rep["expected_count"] = bignum(expected);
  rep["count"] = set.orbits.size();
  bool ok = mpz_class(static_cast<unsigned long>(set.orbits.size())) == expected;
  rep["count_ok"] = ok;

  Json orbits = Json::array();
  for (const auto& cp : set.orbits) {
    Json entry = to_json(cp);
    bool orbit_ok = cp.residual_norm <= options.tol;
    try {
      const auto y = PolyTuple::from_coords(cp.coords);
      entry["van_vleck"] = to_json(van_vleck_extract(ws, y.polys[0]));
      const auto op = build_fundamental<Complex>(ws, y);
      const auto cmp = compare_exponents(ws, op, ExponentKind::Fundamental);
      entry["exponents_ok"] = cmp.ok;
      orbit_ok = orbit_ok && cmp.ok;
    } catch (const Error& e) {
      entry["error"] = e.what();
      orbit_ok = false;
    }
    entry["ok"] = orbit_ok;
    ok = ok && orbit_ok;
    orbits.push_back(std::move(entry));
  }
  rep["orbits"] = orbits;
  rep["search_log"] = to_json(set.search_log);
  rep["ok"] = ok;
  rep["elapsed_seconds"] = seconds_since(start);
  out.exit_code = ok ? kExitOk : kExitVerification;
  if (options.csv) out.table = orbit_table(set);
  return out;
}

CommandOutput guarded(const std::function<CommandOutput()>& body) {
  CommandOutput out;
  try {
    return body();
  } catch (const Error& e) {
    out.report = {{"ok", false}, {"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    out.exit_code = exit_code_for(e.code());
  } catch (const nlohmann::json::exception& e) {
    out.report = {{"ok", false}, {"error", "InvalidInput"}, {"message", e.what()}};
    out.exit_code = kExitInvalid;
  } catch (const std::bad_alloc&) {
    out.report = {{"ok", false}, {"error", "ResourceLimit"}, {"message", "out of memory"}};
    out.exit_code = kExitResource;
  }
  return out;
}

std::string render(const CommandOutput& out) {
  if (!out.table.empty()) return out.table;
  return out.report.dump(2) + "\n";
}

}  // namespace lamebethe::cli
