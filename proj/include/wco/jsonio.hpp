#pragma once
// Run configuration and report serialization for the command-line lab.
//
// RunConfig is the flat bag of knobs the subcommands read.  It round-trips
// losslessly through a key=value text file (one pair per line, full-line '#'
// comments), and every report embeds the complete configuration — defaults
// included — so a result file alone identifies its run.  Serialization is
// deterministic: fixed key order, no timestamps, %.17g floats.  Identical
// configuration and seed therefore produce byte-identical reports.

#include <string>
#include <vector>

#include "json.hpp"
#include "wco/calculus.hpp"
#include "wco/diophantine.hpp"
#include "wco/discrepancy.hpp"
#include "wco/opbounds.hpp"
#include "wco/weights.hpp"

namespace wco {

inline constexpr const char* kSchemaVersion = "1";

using Json = nlohmann::ordered_json;

struct RunConfig {
    std::string command;            // subcommand name, set by the CLI
    std::string alpha = "golden";   // rotation angle descriptor
    std::string weight = "e*x";     // weight descriptor
    std::string psi = "power:2";    // approximation-rate family (type-check)
    double epsilon = 1.0;           // weight-function strength
    double t = 0.05;                // exceptional-set clearance parameter
    double x0 = 0.0;                // orbit starting point
    long N = 1000;                  // sequence length / scan depth / Q
    long M = 256;                   // series truncation / sample count
    long G = 256;                   // evaluation grid size
    long precision_bits = 192;      // orbit arithmetic precision
    long seed = 12345;              // Monte-Carlo seed
    std::string out;                // report path ("" = <command>.json)
    std::string csv;                // optional CSV path for curves

    // All fields as key=value lines, in a fixed order; parsing the result
    // back reproduces the struct exactly.
    std::string to_text() const;
};

// Assigns one key=value pair onto cfg.  Unknown keys and unparsable values
// throw UsageError.
void set_config_key(RunConfig& cfg, const std::string& key, const std::string& value);

// Parses flat key=value text.  Blank lines and lines whose first non-space
// character is '#' are skipped; every other line must contain '='.  Keys the
// text does not mention keep their value from `base`.
RunConfig parse_config_text(const std::string& text, RunConfig base = {});
RunConfig parse_config_file(const std::string& path, RunConfig base = {});

// The full configuration as a JSON object (every field, fixed order).
Json config_json(const RunConfig& cfg);

// {schema_version, command, config} — the shared head of every report.
Json report_envelope(const RunConfig& cfg);

Json json_of(const DiscrepancyReport& r);
Json json_of(const TypeCertificate& c);
Json json_of(const LiouvilleReport& r);
Json json_of(const SpectralData& s);
Json json_of(const PowerBoundReport& r);
Json json_of(const MeasureEstimate& m);
Json json_of(const DemoReport& r);
// Calculus results carry their sampled values; pass include_samples = false
// to keep only the certified scalars.
Json json_of(const CalculusResult& r, bool include_samples = true);

// Two-space indented dump with a trailing newline.
std::string render_json(const Json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace wco
