#pragma once

#include "origami/analysis.hpp"

#include <optional>
#include <string>

namespace origami {

/// Config file failed to parse or validate. The CLI maps this to exit 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Per-command parameter blocks; only the block for the invoked subcommand
/// is required to be present.
struct FreqProfileConfig {
    double I_lo, I_hi;
    int n_samples = 1000;
    int n_seed = 2000;
};

struct PortraitConfig {
    GridSpec grid;
    int steps_per_orbit = 1000;
};

struct OrbitConfig {
    double theta0, I0;
    int max_steps = 1000;
};

struct GenFunCheckConfig {
    int step = 0;  // which step's fold parameters to check
    double I_lo, I_hi;
    int n_samples = 20;
};

struct AttractorConfig {
    GridSpec grid;
    int max_steps = 2000;
    int burn_in = 1000;
    double singular_floor = 1e-4;
};

struct ReconstructConfig {
    double theta0, I0;
    int n_rings = 3;
};

struct ValidateConfig {
    int n_points = 1000;
};

/// A fully validated experiment: the module plus whichever command blocks
/// the file provides, and the FNV-1a hash of the file bytes for output
/// provenance.
struct ExperimentConfig {
    ModuleSpec module;
    std::optional<FreqProfileConfig> freq_profile;
    std::optional<PortraitConfig> portrait;
    std::optional<OrbitConfig> orbit;
    std::optional<GenFunCheckConfig> genfun_check;
    std::optional<AttractorConfig> attractor;
    std::optional<ReconstructConfig> reconstruct;
    std::optional<ValidateConfig> validate;
    std::string hash;
};

/// Parses and validates a JSON experiment file. Unknown keys anywhere are
/// rejected; sigma is spelled "M" or "V". Throws ConfigError with the
/// offending key path.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

/// FNV-1a 64-bit hash, hex-encoded; embedded as a comment in every output.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace origami
