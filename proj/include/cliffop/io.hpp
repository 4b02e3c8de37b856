#pragma once
// Serialization: multivectors as JSON, fields as CSV with a grid sidecar,
// solver reports as JSON, and the run manifest.  All numeric output is
// written with fixed formatting in a fixed order so identical inputs give
// byte-identical files.

#include <string>

#include <json.hpp>

#include "cliffop/gross_pitaevskii.hpp"
#include "cliffop/grid.hpp"
#include "cliffop/miura.hpp"
#include "cliffop/multivector.hpp"

namespace cliffop {

using nlohmann::json;

json multivector_to_json(const Multivector& m);
Multivector multivector_from_json(const json& j);

json gridspec_to_json(const GridSpec& g);
GridSpec gridspec_from_json(const json& j);

json convergence_report_to_json(const ConvergenceReport& r);
json gp_report_to_json(const GpReport& r);

json gp_config_to_json(const GpConfig& c);
GpConfig gp_config_from_json(const json& j);

json miura_config_to_json(const MiuraConfig& c);
MiuraConfig miura_config_from_json(const json& j);

// CSV header x1,...,xn,blade,re,im — one row per node per nonzero blade,
// nodes ascending (axis 0 fastest), blades ascending; sidecar JSON carries
// the grid and algebra metadata
void write_field_csv(const std::string& csv_path, const CliffordField& f);
CliffordField read_field_csv(const std::string& csv_path);

std::string format_double(double v);  // %.17g

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace cliffop
