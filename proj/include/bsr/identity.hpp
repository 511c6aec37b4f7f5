#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsr/params.hpp"
#include "bsr/spatial_density.hpp"

namespace bsr::identity {

struct CheckResult {
    std::string name;
    double value = 0;      // measured error / quantity
    double bound = 0;      // tolerance it is held against
    bool pass = false;
    std::string detail;
};

// Proposition-1 identities and the divergence lemma, randomized with the
// given seed: k.u~ = 0, Fourier Stokes residual, |k|-independence of F[D_x u],
// lemma vs spectral divergence on 100 random matrices, int Sigma~ dS' = 0.
std::vector<CheckResult> proposition1_suite(std::uint64_t seed = 20240801);

// Appendix integral terms for the given density spec: I2, I3 vanish; I1, I4
// quadrature against the published closed forms (1e-6 relative).
std::vector<CheckResult> appendix_suite(const rheology::SpatialDensitySpec& spec,
                                        const SuspensionParams& p);

bool all_pass(const std::vector<CheckResult>& checks);
void print_checks(const std::vector<CheckResult>& checks);

}  // namespace bsr::identity
