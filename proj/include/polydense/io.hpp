#pragma once

#include <string>

#include <json.hpp>

#include "polydense/conditions.hpp"
#include "polydense/laplace.hpp"
#include "polydense/measure.hpp"
#include "polydense/orthopoly.hpp"
#include "polydense/projection.hpp"

namespace polydense {

// Shortest decimal string that round-trips to the same double. Infinities
// and NaN render as "inf"/"-inf"/"nan". This is the only float formatter
// used in output files, so identical runs give byte-identical bytes.
std::string format_double(double v);

nlohmann::json describe_weight(const WeightDensity& d);
nlohmann::json to_json(const IntegralOutcome& out);
nlohmann::json to_json(const LaplaceReport& report);
nlohmann::json to_json(const OrthonormalBasis& b);
nlohmann::json to_json(const ProjectionResult& r);
nlohmann::json to_json(const ConditionReport& r);

// CSV body with header "n,c_n,r_n,rel_residual"; one row per degree.
std::string projection_csv(const ProjectionResult& r);

}  // namespace polydense
