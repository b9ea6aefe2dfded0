#include "critline/runconfig.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "critline/csv.hpp"

namespace critline::cli {

namespace {

[[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("cli: " + msg);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config file '" + path + "'");
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            fail("config line " + std::to_string(lineno) + " is not 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key == "form") cfg.form = value;
        else if (key == "prime_table") cfg.prime_table = value;
        else if (key == "n_max") cfg.n_max = static_cast<std::uint32_t>(std::stoul(value));
        else if (key == "X") cfg.X = std::stod(value);
        else if (key == "delta") cfg.delta = std::stod(value);
        else if (key == "h1") cfg.h1 = std::stod(value);
        else if (key == "T") cfg.T = std::stod(value);
        else if (key == "step") cfg.step = std::stod(value);
        else if (key == "tol") cfg.tol = std::stod(value);
        else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "schedule_advisory") cfg.schedule_advisory = (value == "true" || value == "1");
        else if (key == "A") cfg.A = std::stod(value);
        else fail("unknown config key '" + key + "' on line " + std::to_string(lineno));
    }
    return cfg;
}

void RunConfig::save(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail("cannot write config file '" + path + "'");
    out << "form = " << form << '\n';
    out << "prime_table = " << prime_table << '\n';
    out << "n_max = " << n_max << '\n';
    out << "X = " << fmt_double(X) << '\n';
    out << "delta = " << fmt_double(delta) << '\n';
    out << "h1 = " << fmt_double(h1) << '\n';
    out << "T = " << fmt_double(T) << '\n';
    out << "step = " << fmt_double(step) << '\n';
    out << "tol = " << fmt_double(tol) << '\n';
    out << "out_dir = " << out_dir << '\n';
    out << "schedule_advisory = " << (schedule_advisory ? "true" : "false") << '\n';
    out << "A = " << fmt_double(A) << '\n';
}

void RunConfig::validate() const {
    if (n_max < 1) fail("config: n_max must be >= 1");
    if (X < 3.0) fail("config: X must be >= 3");
    if (!(delta > 0.0 && delta < 0.1)) fail("config: delta must lie in (0, 1/10)");
    if (!(h1 > 0.0 && h1 < 1.0)) fail("config: h1 must lie in (0, 1)");
    if (T <= 0.0) fail("config: T must be positive");
    if (step <= 0.0) fail("config: step must be positive");
    if (tol <= 0.0) fail("config: tol must be positive");
    if (A <= 0.0) fail("config: A must be positive");
}

}  // namespace critline::cli
