#pragma once

#include <json.hpp>

#include "nc/domains.hpp"
#include "nc/maps.hpp"
#include "nc/report.hpp"

namespace nc {

using Json = nlohmann::json;

// Complex numbers as [re, im]; matrices as nested row-major arrays.
Json to_json(Complex z);
Json to_json(const Matrix& M);
Json to_json(const NcPoint& x);
Json to_json(const DomainSpec& spec);
Json to_json(const NcMapExpr& expr);
Json to_json(const CheckReport& rep);

Complex complex_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);
NcPoint point_from_json(const Json& j);
DomainSpec domain_from_json(const Json& j);
NcMapExpr map_from_json(const Json& j);

struct ParseError : NcError {
    using NcError::NcError;
};

}  // namespace nc
