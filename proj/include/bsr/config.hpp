#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bsr/params.hpp"
#include "bsr/spatial_density.hpp"

namespace bsr::harness {

enum class Mode { simulate, kinetic, asymptotic, sweep, compare, itest };

Mode mode_from_string(const std::string& s);
std::string to_string(Mode m);

struct DensityConfig {
    std::string variant = "gaussian";  // gaussian | uniform_box | tabulated
    double sigma_x = 2.0, sigma_y = 2.0;
    std::string table_path;

    // builds the spec; the gaussian amplitude pi N^2 / L comes from params
    rheology::SpatialDensitySpec build(const SuspensionParams& p) const;
};

struct SolverConfig {
    int l_max = 32;
    double dt = 0.0;          // 0: automatic
    double tol_steady = 1e-9;
    double t_max = 0.0;       // 0: 1e3 / gamma
};

struct IbmConfig {
    double dt = 0.02;
    double t_burn = 250.0;
    double t_total = 600.0;
    int sample_every = 10;       // steps between stress samples
    std::string restart_path;    // resume `simulate` from a checkpoint
};

struct SeedConfig {
    int replicas = 10;
    std::uint64_t master = 12345;
};

struct SweepAxis {
    std::string axis;             // "B" | "phi" | "gamma"
    std::vector<double> values;
    bool run_ibm = true;
};

struct ExperimentConfig {
    Mode mode = Mode::asymptotic;
    SuspensionParams params;
    DensityConfig density;
    SolverConfig solver;
    IbmConfig ibm;
    SeedConfig seeds;
    std::optional<SweepAxis> sweep;
    std::string out_dir = "out";
    int workers = 0;  // 0: hardware concurrency

    void validate() const;
};

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Strict JSON config: unknown keys are hard errors, every violation names the key.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

// fig1 (B sweep), fig2 (phi sweep), fig3 (gamma sweep), compare
ExperimentConfig preset(const std::string& name);

std::string canonical_json(const ExperimentConfig& c);
std::uint64_t config_hash(const ExperimentConfig& c);  // FNV-1a over canonical_json

// per-replica engine seed: splitmix64 output at counter = replica index,
// so adding replicas never perturbs existing streams
std::uint64_t replica_seed(std::uint64_t master, std::uint64_t replica);

}  // namespace bsr::harness
