#pragma once

#include "isq/core.hpp"
#include "isq/darboux.hpp"
#include "isq/nls.hpp"
#include "isq/quench.hpp"

#include <json.hpp>

#include <string>

namespace isq {

using json = nlohmann::ordered_json;

json to_json(const FieldProfile& p);
FieldProfile profile_from_json(const json& j);

json to_json(const ScatteringData& sd);
// The coupling is not part of the record and must be supplied.
ScatteringData data_from_json(const json& j, const Coupling& c);

json to_json(const DiscreteEigenvalue& z);
json complex_json(cplx z);
cplx complex_from_json(const json& j);

json to_json(const DarbouxStep& st);
DarbouxStep step_from_json(const json& j);

json to_json(const Classification& cl);
json to_json(const FactorizationReport& r);
json to_json(const IsospectralReport& r);
// {pre, post, classification, factorization_residual?}
json to_json(const QuenchReport& r, const Classification& cl, const FactorizationReport* fact = nullptr);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace isq
