#pragma once

// JSON encoding of the domain types. Complex numbers are written as
// [re, im]; on input a bare number or {"re": .., "im": ..} is accepted too.

#include <json.hpp>

#include "lamebethe/diffop.hpp"
#include "lamebethe/master.hpp"
#include "lamebethe/polytuple.hpp"
#include "lamebethe/rootdata.hpp"
#include "lamebethe/solver.hpp"
#include "lamebethe/verify.hpp"

namespace lamebethe {

using Json = nlohmann::json;

Complex complex_from_json(const Json& j);
Json to_json(Complex v);
Json to_json(const std::vector<Complex>& v);

/// {"r", "z", "m", "l"} or, for r = 1, {"z", "classical_m", "l"} where
/// classical_m lists m_s and rows become (0, -m_s). m_inf is derived; when
/// "l" is missing but "m_inf" is given, l is recovered from it
/// (NonAdmissible if that fails).
/// Throws InvalidInput on malformed documents.
WeightSystem weight_system_from_json(const Json& j);
Json to_json(const WeightSystem& ws);

/// {"coords": [[[re, im], ...], ...]}; "t" is accepted as an alias.
Coords coords_from_json(const Json& j);
Json coords_to_json(const Coords& t);

Json to_json(const CriticalPoint& cp);
Json to_json(const SearchLog& log);
Json to_json(const OrbitSet& set);

Json to_json(const Poly<Complex>& p);
Json to_json(const RationalFn<Complex>& f);
Json to_json(const FloatOp& op);
Json to_json(const ExactOp& op);
Json to_json(const ExponentProfile& profile);

Json to_json(const ExponentComparison& cmp);
Json to_json(const FlagWitness& w);
Json to_json(const TildeReport& rep);
Json to_json(const VanVleck& vv);

}  // namespace lamebethe
