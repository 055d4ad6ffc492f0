#include "rydpmp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "rydpmp/abnormal.hpp"
#include "rydpmp/blockade.hpp"
#include "rydpmp/errors.hpp"
#include "rydpmp/grape.hpp"
#include "rydpmp/pmp.hpp"
#include "rydpmp/record_io.hpp"
#include "rydpmp/synthesis.hpp"

namespace rydpmp {
namespace {

namespace fs = std::filesystem;

struct RunConfig {
    std::string case_id = "i";
    TargetManifold target = ExcitationTorus{2};
    ParamFamily family = ParamFamily::Symmetric;
    double dt = 1e-3;
    int min_crossings = 2;
    int max_crossings = 2;
    std::vector<int> signs = {1};
    std::vector<GridAxis> grid;  // empty: family default
    std::string output_dir = ".";
    std::uint64_t seed = 7;
};

// Flags shared by the commands that define a problem.
struct ProblemArgs {
    std::string case_id;
    std::string config_file;
    std::string target_file;
    std::string out_dir;
    double dt = 0.0;
    int crossings = 0;
    std::string sign;
    bool gnuplot = false;
};

void apply_case(RunConfig& c, const std::string& id) {
    const CaseSpec spec = case_spec(id);
    c.case_id = spec.id;
    c.target = spec.target;
    c.family = spec.family;
    c.min_crossings = c.max_crossings = spec.crossings;
    c.signs = {spec.sign};
}

std::vector<int> parse_signs(const std::string& s, const std::string& where) {
    if (s == "1" || s == "+1" || s == "+") return {1};
    if (s == "-1" || s == "-") return {-1};
    if (s == "both") return {1, -1};
    throw ConfigError(where + ": sign must be +1, -1 or both");
}

void apply_config_json(RunConfig& c, const Json& j) {
    if (!j.is_object()) throw SchemaError("/", "config must be a JSON object");
    if (!j.contains("schema")) throw SchemaError("/schema", "missing required field");
    if (!j["schema"].is_number_integer() || j["schema"].get<int>() != kSchemaVersion) {
        throw SchemaError("/schema", "unsupported schema version");
    }
    if (j.contains("case")) {
        if (!j["case"].is_string()) throw SchemaError("/case", "expected a string");
        const auto id = j["case"].get<std::string>();
        if (id != "custom") apply_case(c, id);
        c.case_id = id;
    }
    if (j.contains("target")) {
        c.target = target_from_json(j["target"], "/target");
        if (!j.contains("case")) c.case_id = "custom";
        if (!j.contains("crossings")) {
            c.min_crossings = 1;
            c.max_crossings = 4;
        }
    }
    if (j.contains("family")) {
        if (!j["family"].is_string()) throw SchemaError("/family", "expected a string");
        try {
            c.family = param_family_from_string(j["family"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw SchemaError("/family", e.what());
        }
    }
    if (j.contains("dt")) {
        if (!j["dt"].is_number() || !(j["dt"].get<double>() > 0.0)) throw SchemaError("/dt", "expected a positive number");
        c.dt = j["dt"].get<double>();
    }
    if (j.contains("crossings")) {
        const Json& x = j["crossings"];
        if (x.is_number_integer()) {
            c.min_crossings = c.max_crossings = x.get<int>();
        } else if (x.is_object() && x.contains("min") && x.contains("max") && x["min"].is_number_integer() &&
                   x["max"].is_number_integer()) {
            c.min_crossings = x["min"].get<int>();
            c.max_crossings = x["max"].get<int>();
        } else {
            throw SchemaError("/crossings", "expected an integer or {min, max}");
        }
        if (c.min_crossings < 1 || c.max_crossings < c.min_crossings) {
            throw SchemaError("/crossings", "need 1 <= min <= max");
        }
    }
    if (j.contains("sign")) {
        const Json& s = j["sign"];
        if (s.is_number_integer()) {
            c.signs = parse_signs(std::to_string(s.get<int>()), "/sign");
        } else if (s.is_string()) {
            c.signs = parse_signs(s.get<std::string>(), "/sign");
        } else {
            throw SchemaError("/sign", "expected +1, -1 or \"both\"");
        }
    }
    if (j.contains("grid")) {
        const Json& g = j["grid"];
        if (!g.is_array()) throw SchemaError("/grid", "expected an array of {lo, hi, count}");
        c.grid.clear();
        for (std::size_t i = 0; i < g.size(); ++i) {
            const std::string p = "/grid/" + std::to_string(i);
            const Json& a = g[i];
            if (!a.is_object() || !a.contains("lo") || !a.contains("hi") || !a.contains("count") ||
                !a["lo"].is_number() || !a["hi"].is_number() || !a["count"].is_number_integer() ||
                a["count"].get<int>() < 1) {
                throw SchemaError(p, "expected {lo: number, hi: number, count: integer >= 1}");
            }
            c.grid.push_back({a["lo"].get<double>(), a["hi"].get<double>(), a["count"].get<int>()});
        }
    }
    if (j.contains("output_dir")) {
        if (!j["output_dir"].is_string()) throw SchemaError("/output_dir", "expected a string");
        c.output_dir = j["output_dir"].get<std::string>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw SchemaError("/seed", "expected a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
}

RunConfig resolve(const ProblemArgs& a) {
    RunConfig c;
    apply_case(c, a.case_id.empty() ? "i" : a.case_id);
    if (!a.config_file.empty()) apply_config_json(c, load_json(a.config_file));
    if (!a.target_file.empty()) {
        const Json j = load_json(a.target_file);
        if (j.is_object() && j.contains("schema")) {
            apply_config_json(c, j);
        } else {
            c.target = target_from_json(j, "");
            c.case_id = "custom";
            c.family = ParamFamily::Symmetric;
            c.min_crossings = 1;
            c.max_crossings = 4;
            c.signs = {1};
        }
    }
    if (!a.case_id.empty() && (!a.config_file.empty() || !a.target_file.empty())) apply_case(c, a.case_id);
    if (a.dt > 0.0) c.dt = a.dt;
    if (a.crossings > 0) c.min_crossings = c.max_crossings = a.crossings;
    if (!a.sign.empty()) c.signs = parse_signs(a.sign, "--sign");
    if (!a.out_dir.empty()) c.output_dir = a.out_dir;
    if (!c.grid.empty() && c.grid.size() != param_names(c.family).size()) {
        throw ConfigError("grid has " + std::to_string(c.grid.size()) + " axes, family " + to_string(c.family) +
                          " needs " + std::to_string(param_names(c.family).size()));
    }
    return c;
}

Json config_to_json(const RunConfig& c, const std::string& command) {
    Json grid = Json::array();
    for (const auto& g : (c.grid.empty() ? default_grid(c.family) : c.grid)) {
        grid.push_back({{"lo", g.lo}, {"hi", g.hi}, {"count", g.count}});
    }
    return Json{{"schema", kSchemaVersion},
                {"command", command},
                {"case", c.case_id},
                {"target", target_to_json(c.target)},
                {"family", to_string(c.family)},
                {"dt", c.dt},
                {"crossings", {{"min", c.min_crossings}, {"max", c.max_crossings}}},
                {"signs", c.signs},
                {"grid", grid},
                {"seed", c.seed}};
}

void add_problem_options(CLI::App* sub, ProblemArgs& a) {
    sub->add_option("--case", a.case_id, "built-in problem: i, ii or c");
    sub->add_option("--config", a.config_file, "run configuration JSON (schema 1)");
    sub->add_option("--target", a.target_file, "target manifold JSON, or a full run configuration");
    sub->add_option("--dt", a.dt, "time step");
    sub->add_option("--crossings", a.crossings, "number of detuning zero crossings");
    sub->add_option("--sign", a.sign, "initial slope of the detuning: +1, -1 or both");
    sub->add_option("--out", a.out_dir, "output directory");
    sub->add_flag("--gnuplot", a.gnuplot, "also write a gnuplot script");
}

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw ConfigError("cannot write '" + p.string() + "'");
    return out;
}

std::string stem_for(const std::string& case_id) { return "case_" + case_id; }

SynthesisOptions synthesis_options(const RunConfig& c) {
    SynthesisOptions o;
    o.dt = c.dt;
    if (!c.grid.empty()) o.starts = grid_points(c.grid);
    return o;
}

struct Synthesized {
    ExtremalRecord record;
    std::vector<TraceRow> trace;
    std::vector<ScanEntry> scan;
};

Synthesized run_synthesis(const RunConfig& c) {
    const SynthesisOptions o = synthesis_options(c);
    Synthesized s;
    if (c.min_crossings == c.max_crossings && c.signs.size() == 1) {
        SynthesisResult r = synthesize(c.target, c.family, c.min_crossings, c.signs.front(), o);
        s.record = std::move(r.record);
        s.trace = std::move(r.trace);
    } else {
        ScanResult r = scan_crossings(c.target, c.family, c.min_crossings, c.max_crossings, c.signs, o);
        s.scan = r.entries;
        if (!r.best) {
            throw OptimizationFailed("no crossing count in " + std::to_string(c.min_crossings) + ".." +
                                     std::to_string(c.max_crossings) + " reached fidelity " +
                                     std::to_string(o.pass_fidelity));
        }
        s.record = *r.best;
    }
    s.record.case_id = c.case_id;
    return s;
}

std::string fmt(double v, int digits = 10) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

std::string params_text(const std::vector<double>& p) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " " : "") + fmt(p[i], 8);
    return s;
}

void write_synthesis_outputs(const RunConfig& c, const Synthesized& s, const std::string& hash, bool gnuplot) {
    const fs::path dir(c.output_dir);
    const std::string stem = stem_for(c.case_id);
    save_record((dir / (stem + "_record.json")).string(), s.record, hash);
    {
        auto out = open_out(dir / (stem + "_pulse.csv"));
        write_hash_comment(out, hash);
        write_pulse_csv(out, s.record.pulse);
    }
    {
        auto out = open_out(dir / (stem + "_detuning.csv"));
        write_hash_comment(out, hash);
        write_detuning_csv(out, s.record.curve);
    }
    if (s.record.potential) {
        double m = 0.0;
        for (double d : s.record.curve.delta) m = std::max(m, std::abs(d));
        m = std::max(1.5 * m, 0.5);
        auto out = open_out(dir / (stem + "_potential.csv"));
        write_hash_comment(out, hash);
        write_potential_csv(out, *s.record.potential, -m, m, 401);
    }
    {
        auto out = open_out(dir / (stem + "_trace.csv"));
        write_hash_comment(out, hash);
        write_trace_csv(out, s.trace);
    }
    for (std::size_t k = 0; k < s.record.trajectories.size(); ++k) {
        auto out = open_out(dir / (stem + "_bloch_k" + std::to_string(k + 1) + ".csv"));
        write_hash_comment(out, hash);
        write_bloch_csv(out, s.record.trajectories[k]);
    }
    if (!s.scan.empty()) {
        auto out = open_out(dir / (stem + "_scan.csv"));
        write_hash_comment(out, hash);
        out << "crossings,sign,fidelity,T\n";
        for (const auto& e : s.scan) {
            out << e.crossings << ',' << e.sign << ',' << fmt(e.best_fidelity, 17) << ','
                << (e.record ? fmt(e.record->T(), 17) : std::string("nan")) << '\n';
        }
    }
    if (gnuplot) {
        auto out = open_out(dir / (stem + "_plot.gp"));
        out << "# config_hash=" << hash << '\n' << gnuplot_script(stem, tls_count(s.record.target));
    }
}

int cmd_synthesize(const ProblemArgs& a, std::ostream& out) {
    const RunConfig c = resolve(a);
    const std::string hash = config_hash(config_to_json(c, "synthesize"));
    const Synthesized s = run_synthesis(c);
    write_synthesis_outputs(c, s, hash, a.gnuplot);
    out << "case,T,fidelity,params\n"
        << c.case_id << ',' << fmt(s.record.T()) << ',' << fmt(s.record.fidelity, 12) << ','
        << params_text(s.record.params) << '\n';
    return kExitOk;
}

int cmd_scan(const ProblemArgs& a, int min_c, int max_c, std::ostream& out) {
    RunConfig c = resolve(a);
    c.min_crossings = min_c;
    c.max_crossings = max_c;
    if (a.sign.empty() && c.signs.size() == 1) c.signs = {1};
    const std::string hash = config_hash(config_to_json(c, "scan"));
    const SynthesisOptions o = synthesis_options(c);
    const ScanResult r = scan_crossings(c.target, c.family, min_c, max_c, c.signs, o);
    const fs::path dir(c.output_dir);
    const std::string stem = stem_for(c.case_id);
    auto csv = open_out(dir / (stem + "_scan.csv"));
    write_hash_comment(csv, hash);
    csv << "crossings,sign,fidelity,T\n";
    out << "crossings,sign,fidelity,T,params\n";
    for (const auto& e : r.entries) {
        const std::string t = e.record ? fmt(e.record->T()) : "-";
        out << e.crossings << ',' << e.sign << ',' << fmt(e.best_fidelity, 12) << ',' << t << ','
            << (e.record ? params_text(e.record->params) : "-") << '\n';
        csv << e.crossings << ',' << e.sign << ',' << fmt(e.best_fidelity, 17) << ','
            << (e.record ? fmt(e.record->T(), 17) : std::string("nan")) << '\n';
    }
    if (!r.best) {
        out << "best: none\n";
        return kExitOptimizationFailed;
    }
    ExtremalRecord best = *r.best;
    best.case_id = c.case_id;
    save_record((dir / (stem + "_scan_best.json")).string(), best, hash);
    out << "best: crossings=" << best.crossings << " sign=" << best.sign << " T=" << fmt(best.T()) << '\n';
    return kExitOk;
}

Json pulse_json(const PhasePulse& p, const TargetManifold& target, const std::string& case_id, double fid,
                const std::string& hash) {
    return Json{{"schema", kSchemaVersion},
                {"case", case_id},
                {"config_hash", hash},
                {"target", target_to_json(target)},
                {"segments", p.size()},
                {"dt", p.dt()},
                {"T", p.duration()},
                {"phi", std::vector<double>(p.phi().begin(), p.phi().end())},
                {"fidelity", fid}};
}

// Any file with dt and phi: records and GRAPE outputs alike.
PhasePulse load_pulse(const std::string& path) {
    const Json j = load_json(path);
    if (!j.is_object() || !j.contains("dt") || !j["dt"].is_number()) throw SchemaError("/dt", "missing or not a number");
    if (!j.contains("phi") || !j["phi"].is_array()) throw SchemaError("/phi", "missing or not an array");
    try {
        return PhasePulse(j["dt"].get<double>(), j["phi"].get<std::vector<double>>());
    } catch (const std::invalid_argument& e) {
        throw SchemaError("/phi", e.what());
    } catch (const Json::exception& e) {
        throw SchemaError("/phi", e.what());
    }
}

struct GrapeArgs {
    int segments = 128;
    double T = 0.0;
    int restarts = 12;
    std::uint64_t seed = 7;
    std::string record_file;
};

GrapeConfig grape_config(const GrapeArgs& g, double T) {
    GrapeConfig cfg;
    cfg.segments = g.segments;
    cfg.T = T;
    cfg.restarts = g.restarts;
    cfg.seed = g.seed;
    return cfg;
}

int cmd_grape(const ProblemArgs& a, const GrapeArgs& g, std::ostream& out) {
    RunConfig c = resolve(a);
    c.seed = g.seed;
    double T = g.T;
    if (!g.record_file.empty()) {
        const ExtremalRecord rec = load_record(g.record_file);
        c.target = rec.target;
        c.case_id = rec.case_id;
        if (!(T > 0.0)) T = rec.T();
    }
    if (!(T > 0.0)) T = run_synthesis(c).record.T();
    Json cfg_json = config_to_json(c, "grape");
    cfg_json["segments"] = g.segments;
    cfg_json["T"] = T;
    cfg_json["restarts"] = g.restarts;
    const std::string hash = config_hash(cfg_json);
    const GrapeResult r = grape_optimize(grape_config(g, T), c.target);
    const fs::path dir(c.output_dir);
    const std::string stem = stem_for(c.case_id);
    {
        auto f = open_out(dir / (stem + "_grape.json"));
        f << pulse_json(r.pulse, c.target, c.case_id, r.fidelity, hash).dump(1) << '\n';
    }
    {
        auto f = open_out(dir / (stem + "_grape_pulse.csv"));
        write_hash_comment(f, hash);
        write_pulse_csv(f, r.pulse);
    }
    out << "case,T,segments,fidelity,attempts\n"
        << c.case_id << ',' << fmt(T) << ',' << g.segments << ',' << fmt(r.fidelity, 12) << ',' << r.attempts << '\n';
    return kExitOk;
}

int cmd_compare(const ProblemArgs& a, GrapeArgs g, const std::string& semi_file, const std::string& grape_file,
                bool normalize, double max_linf, std::ostream& out) {
    PhasePulse semi;
    PhasePulse grape;
    RunConfig c = resolve(a);
    if (!semi_file.empty()) {
        semi = load_pulse(semi_file);
    } else {
        semi = run_synthesis(c).record.pulse;
    }
    if (!grape_file.empty()) {
        grape = load_pulse(grape_file);
    } else {
        grape = grape_optimize(grape_config(g, semi.duration()), c.target).pulse;
    }
    CompareOptions opts;
    opts.normalize_time = normalize;
    const PulseAlignment al = compare_pulses(semi, grape, opts);
    out << "linf,l2,offset,reversed,conjugated,samples\n"
        << fmt(al.linf) << ',' << fmt(al.l2) << ',' << fmt(al.offset) << ',' << (al.reversed ? 1 : 0) << ','
        << (al.conjugated ? 1 : 0) << ',' << al.samples << '\n';
    if (max_linf > 0.0 && al.linf > max_linf) {
        out << "aligned L-infinity distance exceeds " << max_linf << '\n';
        return kExitVerificationFailed;
    }
    return kExitOk;
}

int cmd_verify(const std::string& file, std::ostream& out) {
    const Json j = load_json(file);
    const ExtremalRecord rec = record_from_json(j);
    if (!rec.potential) throw SchemaError("/potential", "required for verification");
    const VerificationReport rep = verify_pmp(rec);
    out << "check,residual,tolerance,status\n";
    for (const auto& ch : rep.checks) {
        out << ch.name << ',' << fmt(ch.residual, 6) << ',' << fmt(ch.tolerance, 6) << ','
            << (ch.passed() ? "pass" : "FAIL") << '\n';
    }
    if (!rep.passed()) {
        out << "failed:";
        for (const auto& n : rep.failures()) out << ' ' << n;
        out << '\n';
        return kExitVerificationFailed;
    }
    out << "all checks passed\n";
    return kExitOk;
}

int cmd_abnormal(int l_max, std::int64_t n_max, int top, const std::string& out_dir, std::ostream& out) {
    const auto cands = abnormal_case2_scan(l_max);
    const std::string hash = config_hash(Json{{"command", "abnormal"}, {"lmax", l_max}, {"nmax", n_max}});
    const fs::path dir(out_dir.empty() ? "." : out_dir);
    {
        auto f = open_out(dir / "abnormal_candidates.csv");
        write_hash_comment(f, hash);
        write_candidates_csv(f, cands);
    }
    out << "bound 2*sqrt(3)*pi = " << fmt(abnormal_time_bound()) << '\n';
    out << "candidates: " << cands.size() << '\n';
    out << "l,l_prime,delta,T,closure_k1,closure_k2,gate_phase_achieved\n";
    for (std::size_t i = 0; i < cands.size() && static_cast<int>(i) < top; ++i) {
        const auto& c = cands[i];
        out << c.l << ',' << c.l_prime << ',' << fmt(c.delta) << ',' << fmt(c.T) << ',' << fmt(c.closure_k1, 12)
            << ',' << fmt(c.closure_k2, 12) << ',' << (c.gate_phase_achieved ? 1 : 0) << '\n';
    }
    const InfeasibilityWitness w = case1_exact_infeasibility(n_max);
    {
        auto f = open_out(dir / "case1_witness.csv");
        write_hash_comment(f, hash);
        f << "n,min_residual\n";
        for (const auto& [n, r] : w.running_min) f << n << ',' << fmt(r, 17) << '\n';
    }
    out << "case (i) exact solutions up to n = " << n_max << ": min residual " << fmt(w.min_residual) << " at n = "
        << w.argmin << (w.all_positive ? " (all positive)" : " (zero found)") << '\n';
    const InfeasibilityWitness rc = case1_rational_control(7, 5, std::min<std::int64_t>(n_max, 1000));
    out << "rational control sqrt(2) -> 7/5: min residual " << fmt(rc.min_residual) << " at n = " << rc.argmin << '\n';
    return kExitOk;
}

int cmd_blockade(const ProblemArgs& a, const std::string& record_file, const std::vector<double>& bs,
                 std::ostream& out) {
    const RunConfig c = resolve(a);
    PhasePulse pulse;
    std::string case_id = c.case_id;
    if (!record_file.empty()) {
        const ExtremalRecord rec = load_record(record_file);
        pulse = rec.pulse;
        case_id = rec.case_id;
    } else {
        pulse = run_synthesis(c).record.pulse;
    }
    Json cfg = config_to_json(c, "blockade");
    cfg["B"] = bs;
    const std::string hash = config_hash(cfg);
    auto f = open_out(fs::path(c.output_dir) / (stem_for(case_id) + "_blockade.csv"));
    write_hash_comment(f, hash);
    f << "B,infidelity_k1,infidelity_k2,double_excitation\n";
    out << "B,infidelity_k1,infidelity_k2,double_excitation\n";
    for (double b : bs) {
        const BlockadeReport r = blockade_reduction_error(pulse, b);
        out << fmt(b) << ',' << fmt(r.infidelity_k1, 6) << ',' << fmt(r.infidelity_k2, 6) << ','
            << fmt(r.double_excitation, 6) << '\n';
        f << fmt(b, 17) << ',' << fmt(r.infidelity_k1, 17) << ',' << fmt(r.infidelity_k2, 17) << ','
          << fmt(r.double_excitation, 17) << '\n';
    }
    return kExitOk;
}

int cmd_bloch_export(const std::string& record_file, const std::string& out_dir, std::ostream& out) {
    const Json j = load_json(record_file);
    const ExtremalRecord rec = record_from_json(j);
    const std::string hash = j.value("config_hash", std::string());
    const fs::path dir(out_dir.empty() ? "." : out_dir);
    const std::string stem = stem_for(rec.case_id);
    for (std::size_t k = 0; k < rec.trajectories.size(); ++k) {
        const std::string suffix = "_k" + std::to_string(k + 1) + ".csv";
        {
            auto f = open_out(dir / (stem + "_bloch" + suffix));
            write_hash_comment(f, hash);
            write_bloch_csv(f, rec.trajectories[k]);
        }
        {
            auto f = open_out(dir / (stem + "_trajectory" + suffix));
            write_hash_comment(f, hash);
            write_trajectory_csv(f, rec.trajectories[k]);
        }
        const Vec3 b = bloch_vector(rec.trajectories[k].final_state());
        out << "k=" << k + 1 << " final bloch (" << fmt(b.x(), 6) << ", " << fmt(b.y(), 6) << ", " << fmt(b.z(), 6)
            << ")\n";
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Time-optimal global pulses for Rydberg-blockaded qubits", "pmp_pulse"};
    app.require_subcommand(1);

    ProblemArgs syn;
    auto* s_syn = app.add_subcommand("synthesize", "optimize the quartic-potential parameters");
    add_problem_options(s_syn, syn);

    ProblemArgs scan;
    int scan_min = 1;
    int scan_max = 6;
    auto* s_scan = app.add_subcommand("scan", "synthesize over a range of crossing counts");
    add_problem_options(s_scan, scan);
    s_scan->add_option("--min", scan_min, "smallest crossing count");
    s_scan->add_option("--max", scan_max, "largest crossing count");

    ProblemArgs gr;
    GrapeArgs grape_args;
    auto* s_grape = app.add_subcommand("grape", "piecewise-constant GRAPE at fixed T");
    add_problem_options(s_grape, gr);
    s_grape->add_option("--segments", grape_args.segments, "number of segments");
    s_grape->add_option("--T", grape_args.T, "duration (default: the synthesized optimum)");
    s_grape->add_option("--restarts", grape_args.restarts, "random restarts");
    s_grape->add_option("--seed", grape_args.seed, "restart seed");
    s_grape->add_option("--record", grape_args.record_file, "take target and T from a record");

    ProblemArgs cmp;
    GrapeArgs cmp_grape;
    cmp_grape.segments = 256;
    std::string semi_file;
    std::string grape_file;
    bool normalize = false;
    double max_linf = 0.0;
    auto* s_cmp = app.add_subcommand("compare", "gauge-aligned distance between two pulses");
    add_problem_options(s_cmp, cmp);
    s_cmp->add_option("--semi", semi_file, "record or pulse JSON (default: synthesize the case)");
    s_cmp->add_option("--grape", grape_file, "pulse JSON (default: run GRAPE at the same T)");
    s_cmp->add_option("--segments", cmp_grape.segments, "GRAPE segments when running GRAPE");
    s_cmp->add_option("--seed", cmp_grape.seed, "GRAPE restart seed");
    s_cmp->add_flag("--normalize-time", normalize, "compare on t/T when durations differ");
    s_cmp->add_option("--max-linf", max_linf, "exit 3 when the aligned distance is larger");

    std::string verify_file;
    auto* s_ver = app.add_subcommand("verify", "check the PMP invariants of a record");
    s_ver->add_option("record", verify_file, "record JSON")->required();

    int l_max = 20;
    std::int64_t n_max = 1000000;
    int top = 10;
    std::string abn_out;
    auto* s_abn = app.add_subcommand("abnormal", "abnormal extremal analysis");
    s_abn->add_option("--lmax", l_max, "largest l' in the case (ii) enumeration");
    s_abn->add_option("--nmax", n_max, "largest n in the case (i) scan");
    s_abn->add_option("--top", top, "rows to print");
    s_abn->add_option("--out", abn_out, "output directory");

    ProblemArgs blk;
    std::string blk_record;
    std::vector<double> bs = {500.0};
    auto* s_blk = app.add_subcommand("blockade", "full two-atom model against the effective TLSs");
    add_problem_options(s_blk, blk);
    s_blk->add_option("--record", blk_record, "pulse source (default: synthesize the case)");
    s_blk->add_option("--B", bs, "blockade strengths")->expected(1, -1);

    std::string bloch_record;
    std::string bloch_out;
    auto* s_bloch = app.add_subcommand("bloch-export", "Bloch and state trajectories of a record");
    s_bloch->add_option("record", bloch_record, "record JSON")->required();
    s_bloch->add_option("--out", bloch_out, "output directory");

    try {
        std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
        app.parse(rest);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (*s_syn) return cmd_synthesize(syn, out);
        if (*s_scan) return cmd_scan(scan, scan_min, scan_max, out);
        if (*s_grape) return cmd_grape(gr, grape_args, out);
        if (*s_cmp) return cmd_compare(cmp, cmp_grape, semi_file, grape_file, normalize, max_linf, out);
        if (*s_ver) return cmd_verify(verify_file, out);
        if (*s_abn) return cmd_abnormal(l_max, n_max, top, abn_out, out);
        if (*s_blk) return cmd_blockade(blk, blk_record, bs, out);
        if (*s_bloch) return cmd_bloch_export(bloch_record, bloch_out, out);
    } catch (const SchemaError& e) {
        err << "schema error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const OptimizationFailed& e) {
        err << "optimization failed: " << e.what() << '\n';
        return kExitOptimizationFailed;
    } catch (const Stalled& e) {
        err << "optimization failed: " << e.what() << '\n';
        return kExitOptimizationFailed;
    } catch (const MissingPotential& e) {
        err << "schema error at /potential: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const DurationMismatch& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

}  // namespace rydpmp
