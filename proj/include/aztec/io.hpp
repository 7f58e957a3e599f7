#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aztec/model.hpp"

namespace aztec {

// Run manifest written alongside every output artifact (JSON).
struct RunManifest {
    std::string subcommand;
    WeightConfig cfg;
    std::uint64_t seed = 0;
    std::string rng_algorithm;
    double tolerance = 0;
    int threads = 0;
    std::string extra;  // free-form key:value notes

    void write(const std::string& path) const;
};

// Formats a double with 17 significant digits (round-trip exact).
std::string fmt17(double v);

}  // namespace aztec
