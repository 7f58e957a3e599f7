#include "aztec/io.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "aztec/rng.hpp"

namespace aztec {

std::string fmt17(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void RunManifest::write(const std::string& path) const {
    nlohmann::json j;
    j["tool"] = "aztec-toolkit";
    j["version"] = "1.0.0";
    j["subcommand"] = subcommand;
    j["config"] = {{"ell", cfg.ell},
                   {"alphas", cfg.alphas},
                   {"betas", cfg.betas},
                   {"N", cfg.n_param},
                   {"seed", cfg.seed}};
    j["seed"] = seed;
    j["rng_algorithm"] = rng_algorithm.empty() ? kRngAlgorithm : rng_algorithm;
    j["tolerance"] = tolerance;
    j["threads"] = threads;
    if (!extra.empty()) j["notes"] = extra;
    auto now = std::chrono::system_clock::now().time_since_epoch();
    j["timestamp_unix"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
    std::ofstream out(path);
    out << j.dump(2) << '\n';
}

}  // namespace aztec
