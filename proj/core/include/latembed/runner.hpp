#ifndef LATEMBED_RUNNER_HPP
#define LATEMBED_RUNNER_HPP

#include <memory>
#include <string>
#include <vector>

#include "latembed/fields.hpp"
#include "latembed/lattice.hpp"
#include "latembed/manifold.hpp"
#include "latembed/objective.hpp"
#include "latembed/optimizer.hpp"

namespace latembed {

struct OutputPaths {
    std::string directory = ".";
    std::string points_csv = "points.csv";
    std::string edges_csv = "edges.csv";
    std::string report = "report.txt";
};

// A fully resolved run: everything the pipeline needs, validated.
struct RunConfig {
    Lattice lattice{1};
    std::shared_ptr<const Manifold> manifold;
    double activation_epsilon = 0.25;
    std::vector<Region> regions;
    ObjectiveParams objective;
    OptimizerOptions optimizer;
    OutputPaths output;
};

// Parse plus schema and cross-field validation. Diagnostics are
// "<path>: <message>" lines; an empty list means the config is valid and
// `config` is usable.
struct ConfigParse {
    RunConfig config;
    std::vector<std::string> diagnostics;
    bool ok() const { return diagnostics.empty(); }
};

ConfigParse parse_config_text(const std::string& text);
// Unreadable files become a diagnostic, not an exception.
ConfigParse parse_config_file(const std::string& path);

struct RunOutcome {
    // 0 success; 2 validation failure; 3 finished without convergence
    // (outputs still written).
    int exit_code = 0;
    Termination termination = Termination::kConverged;
    std::vector<std::string> files_written;
    std::vector<std::string> diagnostics;
};

// Execute a validated config: optimize, then write the points CSV, edges
// CSV, and report under the output directory. The LATEMBED_OUTPUT_DIR
// environment variable, when set, replaces the configured directory;
// `threads` sets the worker count (0 keeps the default of 1).
RunOutcome run_config(const RunConfig& config, int threads = 0);
RunOutcome run_config_file(const std::string& path, int threads = 0);

// Built-in demo configs, one JSON document per name.
std::vector<std::string> demo_names();
std::string demo_config_text(const std::string& name);

}  // namespace latembed

#endif
