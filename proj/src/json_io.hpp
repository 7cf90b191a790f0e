#pragma once

#include "mccvc/bench.hpp"

namespace mccvc::detail {

Json grid_to_json(const ParamGrid& grid);
ParamGrid grid_from_json(const Json& j);

Json stats_to_json(const SampleStats& stats, const char* prefix, Json& into);

Json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j);

}  // namespace mccvc::detail
