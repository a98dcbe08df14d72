#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "monotone/blowup.hpp"
#include "monotone/elliptic.hpp"
#include "monotone/model.hpp"
#include "monotone/parabolic.hpp"

namespace monotone {

using Json = nlohmann::ordered_json;

/// Finite numbers as numbers; nan and inf as strings so the output stays valid JSON.
Json json_number(double v);
Json json_point(const Point& p, int n);

Json to_json(const IdentityReport& r);
Json to_json(const FunctionalReport& r);
Json to_json(const ParabolicFunctionalReport& r);
Json to_json(const BlowupReport& r);
Json to_json(const AdmissibilityReport& r);

/// Plot-ready tables; every number in shortest round-trip form.
void write_csv(std::ostream& out, const FunctionalReport& r);
void write_csv(std::ostream& out, const std::vector<ParabolicFunctionalReport>& sides);
void write_csv(std::ostream& out, const BlowupReport& r);
void write_csv(std::ostream& out, const std::vector<IdentityReport>& rows);

/// Writes text to a file, creating parent directories; throws Error on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace monotone
