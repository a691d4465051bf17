#pragma once

#include <string>
#include <vector>

#include "purejump/kernel.hpp"

namespace purejump::presets {

/// Independent +-1/n jumps at times 2 - 1/n.
CompensatorSpec intro(long n_max = 100000);
/// Density |x|^{-2+t} on |x| < 1 against dt.
CompensatorSpec ex38(double horizon = 10.0);
/// phi^power N_{tan t}, phi = 1/k on [k-1, k).
CompensatorSpec ex313(int power = 2);
/// Symmetric |x|^{-1-alpha} on R with constant drift rate beta.
CompensatorSpec alpha_stable(double alpha, double beta, double horizon = 1.0);
/// Atoms +-1/(k^2 3^k) with masses k^2 3^{2k}.
CompensatorSpec ex516();
/// |x|^{-2} on 0 < |x| <= 1.
CompensatorSpec inverse_square(double horizon = 1.0);
/// Deterministic jumps k^{-2} at times 1/k.
CompensatorSpec sec54();
/// One-sided |x|^{-1-alpha} on (0, 1], matching drift.
CompensatorSpec one_sided(double alpha = 0.5);
/// Single atom a with mass lambda, matching drift.
CompensatorSpec poisson_atom(double a = 1.0, double lambda = 1.0, double horizon = 1.0);
/// Continuous-clock power law plus fixed-time jumps.
CompensatorSpec qc_dp_mixture();
/// Levels with drift rates (-1)^k.
CompensatorSpec alternating_drift();

std::vector<std::string> names();
CompensatorSpec by_name(const std::string& name);

}  // namespace purejump::presets
