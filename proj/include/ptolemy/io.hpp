#pragma once

#include <string>

#include <json.hpp>

#include "ptolemy/heisenberg.hpp"
#include "ptolemy/intertwiner.hpp"
#include "ptolemy/opcalc.hpp"
#include "ptolemy/triangulation.hpp"

namespace ptolemy::io {

using json = nlohmann::json;

// {"genus":g,"punctures":n,"triangles":N,
//  "gluing":[[[t,s],[t',s']],...],
//  "arc_labels":{"t:s":label,...}}  (labels 1-based)
json triangulation_to_json(const tri::LabeledTriangulation& T);
tri::LabeledTriangulation triangulation_from_json(const json& j);

// {"start":<inline triangulation or file path>,
//  "moves":[{"flip":k}|{"permute":[[cycle],...]}],
//  "closing_iso":"identity"?}  (arcs 1-based, permutations in cycle notation)
json word_to_json(const tri::GroupoidWord& w);
tri::GroupoidWord word_from_json(const json& j, const std::string& base_dir = "");

json exchange_to_json(const tri::ExchangeMatrix& em);

// {"variables":[...],"operators":{"x_1":{"pos":{"var":"p/q",...},...},...}}
json operator_system_to_json(const heis::OperatorSystem& sys);

json linear_map_to_json(const heis::LinearSymplecticMap& m);

json representation_element_to_json(const itw::RepresentationElement& el);

json residual_report_to_json(const op::ResidualReport& rep);

json relation_report_to_json(const itw::RelationReport& rep);

std::string format_double(double v);  // 17 significant digits

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace ptolemy::io
