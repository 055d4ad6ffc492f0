#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rydpmp/bfgs.hpp"
#include "rydpmp/record.hpp"

namespace rydpmp {

using ParamPoint = std::vector<double>;

/// Uniform tensor grid, first axis slowest. Each axis is {lo, hi, count}.
struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;
};
std::vector<ParamPoint> grid_points(const std::vector<GridAxis>& axes);

/// 8x8 over delta0 in [0.5, 2], v0 in [-2, -0.2] (symmetric);
/// 5x5x5 over delta_plus in [0.3, 1.5], delta_minus in [-1.5, -0.3], v0 in [-1.5, -0.1] (asymmetric).
std::vector<GridAxis> default_grid(ParamFamily family);

/// Built-in problems: "i" (both TLSs excited), "ii" (CZ phase line), "c" (TLS 1 excited, TLS 2
/// returned to |0>).
struct CaseSpec {
    std::string id;
    TargetManifold target;
    ParamFamily family = ParamFamily::Symmetric;
    int crossings = 2;
    int sign = 1;
};
CaseSpec case_spec(const std::string& id);

struct SynthesisOptions {
    double dt = 1e-3;
    /// Multi-start runs use this coarser grid first; the best candidates are then re-optimized at dt.
    double explore_dt = 1e-2;
    int explore_iters = 60;
    int polish_count = 4;
    double pass_fidelity = 0.999;
    double fail_fidelity = 0.99;
    double time_cap = 100.0;
    /// Multi-start points; empty means default_grid(family).
    std::vector<ParamPoint> starts;
    BfgsOptions bfgs;
};

struct TraceRow {
    int iter = 0;
    ParamPoint params;
    double fidelity = 0.0;
    double T = 0.0;
};

struct SynthesisResult {
    ExtremalRecord record;
    std::vector<TraceRow> trace;
};

/// Fidelity at one parameter point, or NaN when the point is infeasible (invalid potential,
/// no crossing, energy drift).
double shooting_fidelity(const TargetManifold& target, ParamFamily family, const ParamPoint& params,
                         int crossings, int sign, const ShootingOptions& shooting);

/// Single BFGS run from `init` at opts.dt.
SynthesisResult synthesize_from(const TargetManifold& target, ParamFamily family, const ParamPoint& init,
                                int crossings, int sign, const SynthesisOptions& opts = {});

/// Multi-start synthesis. Among final records with fidelity >= pass_fidelity the one with the
/// shortest T wins; otherwise the highest fidelity. Throws OptimizationFailed below fail_fidelity.
SynthesisResult synthesize(const TargetManifold& target, ParamFamily family, int crossings, int sign,
                           const SynthesisOptions& opts = {});

struct ScanEntry {
    int crossings = 0;
    int sign = 1;
    std::optional<ExtremalRecord> record;   // set when the fidelity passed
    double best_fidelity = 0.0;
};

struct ScanResult {
    std::vector<ScanEntry> entries;
    std::optional<ExtremalRecord> best;     // passing record with minimal T
};

ScanResult scan_crossings(const TargetManifold& target, ParamFamily family, int min_crossings,
                          int max_crossings, const std::vector<int>& signs,
                          const SynthesisOptions& opts = {});

}  // namespace rydpmp
