#pragma once

#include <string>

#include "wallforge/asymptotics.hpp"
#include "wallforge/certifier.hpp"

namespace wallforge {

// All artifact JSON goes through this tiny emitter instead of a generic
// serializer: every number is printed with %.17g so outputs round-trip
// exactly and repeated runs are byte-identical.
std::string fmt17(double x);
std::string json_escape(const std::string& s);

std::string certificate_to_json(const Certificate& cert);
std::string tail_fit_to_json(const Params& p, const TailFit& fit, double R, double h);
std::string omega_zero_to_json(const OmegaZeroReport& rep, double R, double h);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace wallforge
