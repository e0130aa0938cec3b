#pragma once

// Command-line front end: parameter sweeps, optimal-strategy reports,
// Monte-Carlo validation and the scissors/reversal dictionary, all emitted
// as CSV (plots are left to external tools).  Numeric fields carry 12
// significant digits with a locale-independent decimal point, so repeated
// runs with identical flags and seed are byte-identical.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "entrev/mc.hpp"
#include "entrev/optimize.hpp"

namespace entrev::cli {

// Exit codes shared by every subcommand.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

enum class RMode { Fixed, Optimal, Grid };

struct SweepSpec {
    Scenario model = Scenario::SinglePair;
    OutcomePolicy policy = OutcomePolicy::PhiOnly;
    double d_start = 0.0;
    double d_stop = 1.0;
    double d_step = 0.01;
    RMode r_mode = RMode::Optimal;
    double r_fixed = 0.0;
    std::string out_path;  // empty writes to stdout

    void validate_ranges() const;  // throws ArgumentError
};

struct OptimizeSpec {
    Scenario model = Scenario::TwoWay;
    OutcomePolicy policy = OutcomePolicy::PhiOnly;
    double damping = 0.0;
    RMode r_mode = RMode::Optimal;
    double r_fixed = 0.0;
    std::string out_path;  // optional CSV copy of the report
};

struct ValidateSpec {
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 42;
    int shards = 4;
    // Test hook: shifts every analytic cell target by this amount so the
    // negative control can prove the gate actually trips.
    double corrupt_bias = 0.0;
};

struct NlaSpec {
    double eta_start = 0.5;
    double eta_stop = 0.95;
    double eta_step = 0.05;
    std::string out_path;
};

std::string format_number(double x);  // 12 significant digits; inf -> "inf"

// Grid of start + k*step covering [start, stop] (endpoint included when it
// lands on the grid within 1e-9 of a step).
std::vector<double> make_grid(double start, double stop, double step);

void write_sweep_csv(const SweepSpec& spec, std::ostream& out);
void write_report_text(const RecoveryReport& report, std::ostream& out);
void write_report_csv(const RecoveryReport& report, std::ostream& out);
void write_nla_csv(const NlaSpec& spec, std::ostream& out);

struct ValidationResult {
    bool passed = true;
    std::string text;
};
ValidationResult run_validation(const ValidateSpec& spec);

// Full argv-level entry points; parse errors return kExitUsage, I/O failures
// kExitIo and validation breaches kExitValidation.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace entrev::cli
