#pragma once

#include <cstdint>
#include <string>

namespace critline::cli {

/// Flat key = value run configuration. CLI flags override file values;
/// write() emits every field so a config round-trips losslessly.
struct RunConfig {
    std::string form = "delta";
    std::string prime_table;  // optional custom coefficient source
    std::uint32_t n_max = 100000;
    double X = 300.0;
    double delta = 0.05;
    double h1 = 0.3;
    double T = 40.0;
    double step = 0.075;  // h1 / 4
    double tol = 1e-8;
    std::string out_dir = "out";
    bool schedule_advisory = false;
    double A = 10.0;  // schedule constant ("sufficiently large", heuristic)

    static RunConfig from_file(const std::string& path);
    void save(const std::string& path) const;
    void validate() const;
};

}  // namespace critline::cli
