#pragma once

#include <compare>
#include <string>

namespace mpca {

enum class Climate { rainy, dry, monsoon_alternating };
enum class Occupancy { working_time, rest_time };

/// Categorical description of an operating condition: which units run,
/// the outdoor climate regime, and building occupancy. The set of distinct
/// keys over the training data fixes the condition count.
struct PriorKey {
    std::string units_running;
    Climate climate = Climate::monsoon_alternating;
    Occupancy occupancy = Occupancy::working_time;

    auto operator<=>(const PriorKey&) const = default;
};

std::string climate_to_string(Climate c);
Climate climate_from_string(const std::string& s);
std::string occupancy_to_string(Occupancy o);
Occupancy occupancy_from_string(const std::string& s);

} // namespace mpca
