#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dynerg/simulate.hpp"
#include "dynerg/stats.hpp"
#include "dynerg/theory.hpp"

namespace dynerg {

using Json = nlohmann::json;

struct RunConfig {
    SimConfig sim;
    double z_threshold = 5.0;
    int threads = 1;

    bool operator==(const RunConfig& o) const;
};

// Schema-checked parse; unknown keys rejected. Rationals arrive as strings.
RunConfig parse_run_config(const Json& doc);
RunConfig load_run_config(const std::string& path);
Json run_config_to_json(const RunConfig& config);

// Shipped schemas (embedded copies; the schema/ directory mirrors them).
const Json& config_schema();
const Json& report_schema();
const Json& summary_schema();

// Minimal JSON-schema checker: type, properties, required, additionalProperties,
// items, enum, minItems, maxItems, minimum, exclusiveMinimum, anyOf.
// Throws std::invalid_argument naming the offending path.
void validate_schema(const Json& doc, const Json& schema, const std::string& path = "$");

// Motif helpers shared by config and reports.
LabeledGraph motif_from_json(const Json& entry);
Json motif_to_json(const LabeledGraph& motif);
std::string motif_display_name(const LabeledGraph& motif);
Json pattern_to_json(const Pattern& pattern);

// RFC 4180: CRLF rows, quotes doubled, fields quoted when they need it.
std::string csv_field(const std::string& raw);
std::string format_double(double x);  // shortest round-trip decimal

// Analyzer output: exponents, optimal sets, constants, limit kernels on the grid.
Json build_analyze_report(const RunConfig& config);

// Simulation outputs.
struct SimulationOutputs {
    Json summary;
    std::string counts_csv;
    std::string plotdata_csv;
    bool pass = false;
};
SimulationOutputs run_simulation_outputs(const RunConfig& config, int threads);

Json example_report_to_json(const ExampleReport& report);

// Creates parent directories as needed.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace dynerg
