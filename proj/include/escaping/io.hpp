#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "escaping/hairs.hpp"
#include "escaping/lemmas.hpp"
#include "escaping/models.hpp"
#include "escaping/normalization.hpp"
#include "escaping/symbolic.hpp"

namespace escaping::io {

using nlohmann::json;

json complex_to_json(const geom::Cplx& z);
geom::Cplx complex_from_json(const json& j);

// Model file: {"family": "exponential"|"cosh", "parameter": [re, im],
// "scale_K": number}. scale_K <= 0 (or absent) means "choose automatically".
struct ModelFile {
    models::EntireModel model;
    double scale_K = 0.0;
};

json model_to_json(const ModelFile& m);
ModelFile model_from_json(const json& j);
// Throws std::runtime_error with line information on parse failure.
ModelFile load_model_file(const std::string& path);

json polyline_to_json(const geom::Polyline& p);
geom::Polyline polyline_from_json(const json& j);
void write_polyline_csv(const geom::Polyline& p, std::ostream& out);
geom::Polyline read_polyline_csv(std::istream& in);

json transform_to_json(const models::LogTransform& lt);
json postsingular_to_json(const norm::PostsingularReport& rep);
json expansion_to_json(const models::ExpansionReport& rep);

std::string verdict_name(sym::Verdict v);
std::string label_token(const models::TractLabel& l);   // "base:branch"
models::TractLabel parse_label_token(const std::string& tok);
json address_to_json(const sym::ExternalAddress& a);
json orbit_to_json(const sym::OrbitRecord& rec);

json hair_to_json(const hairs::HairApproximation& h);
json merge_to_json(const hairs::MergeReport& m);
json campaign_to_json(const lemmas::CampaignReport& rep);

}  // namespace escaping::io
