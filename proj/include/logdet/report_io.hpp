#pragma once

#include "logdet/bounds.hpp"
#include "logdet/estimator.hpp"

#include "json.hpp"

#include <iosfwd>

namespace logdet {

nlohmann::ordered_json to_json(const EstimateReport& report, bool include_queries);
nlohmann::ordered_json to_json(const ParameterSet& set);
nlohmann::ordered_json to_json(const SpectralConstants& consts);

void write_text(std::ostream& out, const EstimateReport& report);
void write_text(std::ostream& out, const ParameterSet& set);

/// Shortest decimal form that round-trips exactly.
std::string format_double(double x);

} // namespace logdet
