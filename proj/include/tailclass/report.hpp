#pragma once

#include <array>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tailclass/classifiers.hpp"
#include "tailclass/families.hpp"

namespace tailclass {

enum class Command { Classify, Indices, Convolve, Pitman, Verify };
enum class OutputFormat { Json, Csv, Text };

// Compact text form of a family spec, e.g. "pareto:a=2",
// "weibull:shape=0.5,scale=1". parse and format round-trip.
FamilySpec parse_family_spec(const std::string& text);  // throws UsageError
std::string format_family_spec(const FamilySpec& spec);

struct GridOverrides {
    std::optional<double> x_start;
    std::optional<double> ratio;
    std::optional<int> count;
    std::optional<int> window;
};

struct RunConfig {
    Command command = Command::Classify;
    std::vector<FamilySpec> models;
    GridOverrides grid;
    QuadratureSpec quad;
    std::vector<double> u_grid{1.5, 2.0, 4.0, 8.0};
    std::vector<double> kappa_grid{0.5, 1.0, 2.0};
    double tol = 0.02;
    OutputFormat output = OutputFormat::Json;  // convolve/pitman default to csv
    bool output_defaulted = true;
    std::string output_path;  // empty writes to stdout
};

// Parses a subcommand argv (without the program name). Throws UsageError
// on anything that cannot become a valid RunConfig.
RunConfig parse_config(const std::vector<std::string>& argv);

struct CurveTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct Report {
    std::string version;
    RunConfig config;
    GridSpec base_grid;  // resolved defaults + overrides, before per-op caps
    std::vector<ClassVerdict> verdicts;
    std::optional<IndexEstimate> tail_idx, density_idx, hazard_idx;
    std::optional<LimitEstimate> xh;
    bool xh_unbounded = false;
    std::vector<BoundCheck> bounds;
    std::optional<ClosureVerdict> closure;
    std::optional<CurveTable> curve;
    std::map<std::string, double> timings;
};

nlohmann::json to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

// The comparison canon: a report's JSON minus its wall-clock section.
nlohmann::json canonical_form(nlohmann::json report_json);

// Executes the configured command and serializes the result to `out`
// (or config.output_path when set). Returns the report.
Report run(const RunConfig& config, std::ostream& out);

// True when a verdict the run was asked for came back Inconclusive; the
// CLI maps this to exit status 3 so CI can gate on certainty.
bool any_inconclusive(const Report& report);

}  // namespace tailclass
