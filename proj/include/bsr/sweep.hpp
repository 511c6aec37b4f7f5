#pragma once

#include <string>
#include <vector>

#include "bsr/config.hpp"
#include "bsr/ibm.hpp"
#include "bsr/kinetic.hpp"
#include "bsr/rheology.hpp"

namespace bsr::harness {

struct SweepRow {
    double value = 0;                 // swept parameter
    double eta_formula = 0;
    double eta_ibm_mean = 0, eta_ibm_stderr = 0;       // dipolar-only estimate
    double eta_ibm_total_mean = 0, eta_ibm_total_stderr = 0;  // with collision stress
    double N12 = 0, N23 = 0;
    double D_hat = 0;                 // NaN outside the pusher matching regime
    bool ibm_ok = false;
    std::string flag;                 // nonempty when the IBM leg failed
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::string csv_path;
};

// One IBM trajectory: time series of stress samples under the configured
// schedule, from the replica's derived seed.
std::vector<ibm::StressSample> run_ibm_trajectory(const SuspensionParams& p, const IbmConfig& ibm,
                                                  std::uint64_t seed,
                                                  std::vector<Vec3>* orientation_samples = nullptr);

struct IbmEnsemble {
    double dipolar_mean = 0, dipolar_stderr = 0;
    double total_mean = 0, total_stderr = 0;
    int replicas = 0;
};
IbmEnsemble run_ibm_ensemble(const SuspensionParams& p, const IbmConfig& ibm,
                             const SeedConfig& seeds, int workers,
                             std::vector<Vec3>* orientation_samples = nullptr);

SweepResult run_sweep(const ExperimentConfig& config);

struct CompareReport {
    double B = 0;
    double kinetic_vs_asymptotic_linf = 0;
    double kinetic_vs_asymptotic_l2 = 0;
    double ibm_vs_kinetic_l2 = 0;
    double ibm_vs_asymptotic_l2 = 0;
    double eta_formula = 0, eta_kinetic = 0, eta_ibm = 0, eta_ibm_stderr = 0;
    bool kinetic_steady_reached = false;
    std::string csv_path;
};

CompareReport compare_layers(const ExperimentConfig& config);

// effective viscosity of a kinetic steady state: (rho U0 / gamma) <d1 d2>_P
double eta_from_density(const kinetic::OrientationDensity& P, const kinetic::Solver& solver,
                        const SuspensionParams& p);

void ensure_out_dir(const std::string& dir);

}  // namespace bsr::harness
