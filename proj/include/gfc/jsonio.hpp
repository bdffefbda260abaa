#pragma once

#include <json.hpp>

#include "gfc/delta.hpp"
#include "gfc/homalg.hpp"
#include "gfc/qbundle.hpp"
#include "gfc/simpset.hpp"
#include "gfc/symplin.hpp"
#include "gfc/twistedgf.hpp"

namespace gfc {

using Json = nlohmann::ordered_json;

Json quadform_to_json(const QuadForm& q);
QuadForm quadform_from_json(const Json& j);

Json lagrangian_to_json(const LagrD& l);
LagrD lagrangian_from_json(const Json& j);

Json path_to_json(const SymplPath& p);
SymplPath path_from_json(const Json& j);

Json graded_to_json(const GradedAbGroup& g);

Json linfn_to_json(const LinFn& f);
LinFn linfn_from_json(const Json& j);

Json cocycle_to_json(const QCocycle& c);
QCocycle cocycle_from_json(const Json& j);

DiscreteMonoid monoid_from_json(const Json& j);

Json critpoints_to_json(const std::vector<CritPoint>& pts);

Json stable_lift_to_json(const StableLiftD& l);
StableLiftD stable_lift_from_json(const Json& j);

// CSV of a sampled grid field: one row per vertex, coordinates then value
std::string field_to_csv(const CubicalField& f);

Json load_json_file(const std::string& path);   // FileNotFound / ParseError
void write_text_file(const std::string& path, const std::string& text);

}  // namespace gfc
