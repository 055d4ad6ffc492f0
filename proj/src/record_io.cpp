#include "rydpmp/record_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rydpmp/csv.hpp"
#include "rydpmp/errors.hpp"

namespace rydpmp {
namespace {

const Json& require(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path.empty() ? "/" : path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(path + "/" + key, "missing required field");
    return *it;
}

double number(const Json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw SchemaError(path, "expected a finite number");
    return v;
}

int integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
    return j.get<int>();
}

double field(const Json& j, const std::string& key, const std::string& path) {
    return number(require(j, key, path), path + "/" + key);
}

std::vector<double> numbers(const Json& j, const std::string& path) {
    if (!j.is_array()) throw SchemaError(path, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "/" + std::to_string(i)));
    return out;
}

Ket2 ket_from_json(const Json& j, const std::string& path) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "0") return ket0();
        if (s == "1") return ket1();
        throw SchemaError(path, "ket string must be \"0\" or \"1\"");
    }
    if (!j.is_array() || j.size() != 2) throw SchemaError(path, "ket must be [[re, im], [re, im]]");
    Ket2 k;
    for (int i = 0; i < 2; ++i) {
        const std::string p = path + "/" + std::to_string(i);
        const auto& amp = j[static_cast<std::size_t>(i)];
        if (!amp.is_array() || amp.size() != 2) throw SchemaError(p, "amplitude must be [re, im]");
        k(i) = cplx(number(amp[0], p + "/0"), number(amp[1], p + "/1"));
    }
    if (!(k.norm() > 0.0)) throw SchemaError(path, "ket must be nonzero");
    return k;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

std::vector<std::string> param_names(ParamFamily family) {
    if (family == ParamFamily::Symmetric) return {"delta0", "v0"};
    return {"delta_plus", "delta_minus", "v0"};
}

Json target_to_json(const TargetManifold& target) {
    return std::visit(overloaded{
                          [](const ExcitationTorus& t) {
                              return Json{{"type", "excitation_torus"}, {"tls_count", t.tls_count}};
                          },
                          [](const PhaseLine& l) {
                              return Json{{"type", "phase_line"}, {"multipliers", l.multipliers},
                                          {"offsets", l.offsets}};
                          },
                          [](const PerTlsTarget& p) {
                              Json kets = Json::array();
                              for (const auto& k : p.kets) {
                                  kets.push_back(Json::array({Json::array({k(0).real(), k(0).imag()}),
                                                              Json::array({k(1).real(), k(1).imag()})}));
                              }
                              return Json{{"type", "per_tls"}, {"kets", kets}};
                          },
                      },
                      target);
}

TargetManifold target_from_json(const Json& j, const std::string& path) {
    const Json& type = require(j, "type", path);
    if (!type.is_string()) throw SchemaError(path + "/type", "expected a string");
    const auto t = type.get<std::string>();
    if (t == "excitation_torus") {
        int n = 2;
        if (j.contains("tls_count")) n = integer(j["tls_count"], path + "/tls_count");
        if (n < 1) throw SchemaError(path + "/tls_count", "must be >= 1");
        return ExcitationTorus{n};
    }
    if (t == "phase_line") {
        const Json& m = require(j, "multipliers", path);
        if (!m.is_array() || m.empty()) throw SchemaError(path + "/multipliers", "expected a nonempty array");
        PhaseLine line;
        for (std::size_t i = 0; i < m.size(); ++i) {
            line.multipliers.push_back(integer(m[i], path + "/multipliers/" + std::to_string(i)));
        }
        line.offsets = numbers(require(j, "offsets", path), path + "/offsets");
        if (line.offsets.size() != line.multipliers.size()) {
            throw SchemaError(path + "/offsets", "needs one offset per multiplier");
        }
        return line;
    }
    if (t == "per_tls") {
        const Json& kets = require(j, "kets", path);
        if (!kets.is_array() || kets.empty()) throw SchemaError(path + "/kets", "expected a nonempty array");
        PerTlsTarget p;
        for (std::size_t i = 0; i < kets.size(); ++i) {
            p.kets.push_back(ket_from_json(kets[i], path + "/kets/" + std::to_string(i)));
        }
        return p;
    }
    throw SchemaError(path + "/type", "unknown target type '" + t + "'");
}

Json record_to_json(const ExtremalRecord& rec, const std::string& hash) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["case"] = rec.case_id;
    j["config_hash"] = hash;
    j["target"] = target_to_json(rec.target);
    j["family"] = to_string(rec.family);
    Json params = Json::object();
    const auto names = param_names(rec.family);
    for (std::size_t i = 0; i < rec.params.size() && i < names.size(); ++i) params[names[i]] = rec.params[i];
    j["params"] = params;
    if (rec.potential) {
        const auto& p = *rec.potential;
        j["potential"] = {{"c0", p.c0}, {"c1", p.c1}, {"c2", p.c2}, {"c3", p.c3}, {"c4", p.c4}};
    }
    if (rec.invariants) {
        j["invariants"] = {{"C", rec.invariants->C}, {"r1", rec.invariants->r1}, {"r2", rec.invariants->r2}};
    }
    j["dt"] = rec.curve.dt;
    j["T"] = rec.curve.T;
    j["phi0"] = rec.phi0;
    j["delta"] = rec.curve.delta;
    j["ddelta"] = rec.curve.ddelta;
    j["phi"] = std::vector<double>(rec.pulse.phi().begin(), rec.pulse.phi().end());
    j["fidelity"] = rec.fidelity;
    j["crossings"] = rec.crossings;
    j["sign"] = rec.sign;
    return j;
}

ExtremalRecord record_from_json(const Json& j) {
    if (!j.is_object()) throw SchemaError("/", "record must be a JSON object");
    const Json& schema = require(j, "schema", "");
    if (integer(schema, "/schema") != kSchemaVersion) {
        throw SchemaError("/schema", "unsupported schema version " + schema.dump());
    }
    ExtremalRecord rec;
    if (j.contains("case")) {
        if (!j["case"].is_string()) throw SchemaError("/case", "expected a string");
        rec.case_id = j["case"].get<std::string>();
    }
    rec.target = target_from_json(require(j, "target", ""), "/target");
    const Json& fam = require(j, "family", "");
    if (!fam.is_string()) throw SchemaError("/family", "expected a string");
    try {
        rec.family = param_family_from_string(fam.get<std::string>());
    } catch (const std::invalid_argument& e) {
        throw SchemaError("/family", e.what());
    }
    const Json& params = require(j, "params", "");
    for (const auto& name : param_names(rec.family)) rec.params.push_back(field(params, name, "/params"));

    if (j.contains("potential")) {
        const Json& p = j["potential"];
        QuarticPotential pot;
        pot.c0 = field(p, "c0", "/potential");
        pot.c1 = field(p, "c1", "/potential");
        pot.c2 = field(p, "c2", "/potential");
        pot.c3 = field(p, "c3", "/potential");
        pot.c4 = field(p, "c4", "/potential");
        rec.potential = pot;
    }
    if (j.contains("invariants")) {
        const Json& v = j["invariants"];
        rec.invariants = InvariantTriple{field(v, "C", "/invariants"), field(v, "r1", "/invariants"),
                                         field(v, "r2", "/invariants")};
    }
    rec.curve.dt = field(j, "dt", "");
    rec.curve.T = field(j, "T", "");
    if (!(rec.curve.dt > 0.0)) throw SchemaError("/dt", "must be positive");
    rec.phi0 = j.contains("phi0") ? number(j["phi0"], "/phi0") : 0.0;
    rec.curve.delta = numbers(require(j, "delta", ""), "/delta");
    if (j.contains("ddelta")) {
        rec.curve.ddelta = numbers(j["ddelta"], "/ddelta");
        if (rec.curve.ddelta.size() != rec.curve.delta.size()) {
            throw SchemaError("/ddelta", "length differs from /delta");
        }
    } else {
        const std::size_t n = rec.curve.delta.size();
        rec.curve.ddelta.assign(n, 0.0);
        for (std::size_t i = 0; i < n && n > 1; ++i) {
            const std::size_t a = i == 0 ? 0 : i - 1;
            const std::size_t b = i + 1 == n ? i : i + 1;
            const double fd = (rec.curve.delta[b] - rec.curve.delta[a]) / (static_cast<double>(b - a) * rec.curve.dt);
            if (rec.potential) {
                const double e = -2.0 * (*rec.potential)(rec.curve.delta[i]);
                rec.curve.ddelta[i] = std::copysign(std::sqrt(std::max(e, 0.0)), fd);
            } else {
                rec.curve.ddelta[i] = fd;
            }
        }
    }
    const auto phi = numbers(require(j, "phi", ""), "/phi");
    try {
        rec.pulse = PhasePulse(rec.curve.dt, phi);
    } catch (const std::invalid_argument& e) {
        throw SchemaError("/phi", e.what());
    }
    if (!rec.curve.delta.empty() && rec.curve.delta.size() != phi.size() + 1) {
        throw SchemaError("/delta", "needs exactly one more sample than /phi");
    }
    rec.fidelity = field(j, "fidelity", "");
    rec.crossings = integer(require(j, "crossings", ""), "/crossings");
    rec.sign = integer(require(j, "sign", ""), "/sign");
    if (rec.sign != 1 && rec.sign != -1) throw SchemaError("/sign", "must be +1 or -1");
    for (int k = 1; k <= tls_count(rec.target); ++k) {
        rec.trajectories.push_back(propagate_piecewise(rec.pulse, TlsIndex(k), ket0()));
    }
    return rec;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SchemaError("/", std::string("invalid JSON in '") + path + "': " + e.what());
    }
}

void save_record(const std::string& path, const ExtremalRecord& rec, const std::string& hash) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << record_to_json(rec, hash).dump(1) << '\n';
}

ExtremalRecord load_record(const std::string& path) { return record_from_json(load_json(path)); }

std::string config_hash(const Json& config) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : config.dump()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_hash_comment(std::ostream& os, const std::string& hash) { os << "# config_hash=" << hash << '\n'; }

void write_pulse_csv(std::ostream& os, const PhasePulse& pulse) {
    os << "t,phi\n";
    for (std::size_t j = 0; j < pulse.size(); ++j) csv::row(os, {pulse.step_time(j), pulse[j]});
}

void write_detuning_csv(std::ostream& os, const DetuningCurve& curve) {
    os << "t,delta,ddelta\n";
    for (std::size_t i = 0; i < curve.delta.size(); ++i) {
        csv::row(os, {curve.time(i), curve.delta[i], curve.ddelta[i]});
    }
}

void write_potential_csv(std::ostream& os, const QuarticPotential& pot, double lo, double hi, int samples) {
    os << "delta,V\n";
    for (int i = 0; i < samples; ++i) {
        const double d = samples == 1 ? lo : lo + (hi - lo) * i / (samples - 1);
        csv::row(os, {d, pot(d)});
    }
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& trace) {
    const std::size_t np = trace.empty() ? 0 : trace.front().params.size();
    os << "iter";
    for (std::size_t i = 0; i < np; ++i) os << ",p" << i + 1;
    os << ",fidelity,T\n";
    for (const auto& r : trace) {
        os << r.iter;
        for (double p : r.params) os << ',' << csv::format(p);
        os << ',' << csv::format(r.fidelity) << ',' << csv::format(r.T) << '\n';
    }
}

std::string gnuplot_script(const std::string& stem, int tls_count) {
    std::ostringstream g;
    g << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set terminal pngcairo size 1200,400\n"
      << "set output '" << stem << "_overview.png'\n"
      << "set multiplot layout 1,3\n"
      << "set xlabel 't'\nset ylabel 'phi'\n"
      << "plot '" << stem << "_pulse.csv' using 1:2 with lines\n"
      << "set ylabel 'delta'\n"
      << "plot '" << stem << "_detuning.csv' using 1:2 with lines\n"
      << "set xlabel 'delta'\nset ylabel 'V'\n"
      << "plot '" << stem << "_potential.csv' using 1:2 with lines, 0 with lines dt 2 notitle\n"
      << "unset multiplot\n"
      << "set terminal pngcairo size 600,600\n"
      << "set output '" << stem << "_bloch.png'\n"
      << "set view equal xyz\nset xlabel 'x'\nset ylabel 'y'\nset zlabel 'z'\n"
      << "splot ";
    for (int k = 1; k <= tls_count; ++k) {
        g << (k > 1 ? ", " : "") << "'" << stem << "_bloch_k" << k << ".csv' using 2:3:4 with lines title 'k=" << k
          << "'";
    }
    g << '\n';
    return g.str();
}

}  // namespace rydpmp
