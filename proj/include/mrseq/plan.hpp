#pragma once

#include <string>
#include <vector>

#include "mrseq/instance.hpp"

namespace mrseq {

// An ordered stop sequence beginning and ending at the depot.
using Route = std::vector<Stop>;

struct RoutingPlan {
    std::vector<Route> routes;

    bool operator==(const RoutingPlan& other) const = default;
};

// Human form, one route per line: "D-8-L-D".
std::string sequence_string(const Route& route);

// JSON plan files: {"routes": [["depot", 8, "landfill", "depot"], ...]}.
RoutingPlan load_plan(const std::string& text);
std::string save_plan(const RoutingPlan& plan);

// Structural check: routes start/end at the depot, no interior depot stops.
// Throws SchemaError.
void check_plan_shape(const RoutingPlan& plan);

}  // namespace mrseq
