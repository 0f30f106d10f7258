#pragma once

#include <json.hpp>

#include "monotest/calibration.hpp"
#include "monotest/calm.hpp"
#include "monotest/config.hpp"
#include "monotest/harness.hpp"

namespace monotest {

nlohmann::json to_json(const TestReport& r);
nlohmann::json to_json(const ConstantSet& cs);
nlohmann::json to_json(const CalmFit& fit);
nlohmann::json to_json(const ResultRow& row);

}  // namespace monotest
