#pragma once

#include <string>
#include <variant>

#include "json.hpp"
#include "mixkit/homoclinic.hpp"
#include "mixkit/lpp.hpp"
#include "mixkit/maps.hpp"
#include "mixkit/measure.hpp"
#include "mixkit/shadowing.hpp"

namespace mixkit::io {

using Json = nlohmann::ordered_json;

/// Reads a JSON file; InvalidInput on I/O or parse failure.
Json read_json(const std::string& path);

/// "01" or [0, 1].
Word word_from_json(const Json& j);
Json word_to_json(std::span<const Symbol> w);

TransitionMatrix matrix_from_json(const Json& j);
Json matrix_to_json(const TransitionMatrix& a);

/// {"type": "sft", "matrix": ...} | {"type": "sft", "full_shift": k} |
/// {"type": "torus", "matrix": [[2,1],[1,1]]} |
/// {"type": "horseshoe", "contraction": c, "expansion": e}
using System = std::variant<TransitionMatrix, ToralAutomorphism, Horseshoe>;
System system_from_json(const Json& j);
Json system_to_json(const System& s);

/// Target/measure descriptions; see docs/formats.md. `ambient` supplies the
/// matrix for {"type": "parry"}.
Measure measure_from_json(const Json& j, const TransitionMatrix* ambient = nullptr);
Json measure_to_json(const Measure& mu);

Json certificate_to_json(const LppResult& r);
Json excursion_to_json(const ExcursionParameters& e);
Json orbit_to_json(const std::vector<Vec2>& points);
Json orbit_to_json(const std::vector<ShiftPoint>& points);

}  // namespace mixkit::io
