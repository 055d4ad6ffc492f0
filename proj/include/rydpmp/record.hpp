#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rydpmp/detuning.hpp"
#include "rydpmp/fidelity.hpp"
#include "rydpmp/potential.hpp"
#include "rydpmp/propagator.hpp"

namespace rydpmp {

enum class ParamFamily { Symmetric, Asymmetric };

std::string to_string(ParamFamily f);
ParamFamily param_family_from_string(const std::string& s);

/// (delta0, v0) for Symmetric, (delta_plus, delta_minus, v0) for Asymmetric.
/// Throws std::invalid_argument outside the valid region.
QuarticPotential potential_from_params(ParamFamily family, const std::vector<double>& params);

/// One synthesized extremal with everything needed to verify and plot it.
struct ExtremalRecord {
    std::string case_id = "custom";
    TargetManifold target = ExcitationTorus{};
    ParamFamily family = ParamFamily::Symmetric;
    std::vector<double> params;
    std::optional<QuarticPotential> potential;
    std::optional<InvariantTriple> invariants;
    DetuningCurve curve;
    PhasePulse pulse;
    double phi0 = 0.0;
    std::vector<Trajectory> trajectories;
    double fidelity = 0.0;
    int crossings = 0;
    int sign = 1;

    double T() const { return curve.T; }
};

/// Runs the shooting pipeline at one parameter point: potential, detuning curve, pulse,
/// per-TLS trajectories from |0>_k and the target fidelity.
ExtremalRecord build_record(const TargetManifold& target, ParamFamily family,
                            const std::vector<double>& params, int crossings, int sign,
                            const ShootingOptions& shooting);

}  // namespace rydpmp
