#pragma once

#include <cstdint>
#include <vector>

#include "rbmlab/covariance.hpp"
#include "rbmlab/lattice.hpp"

namespace rbmlab {

// |det(1 + A)| <= |e^{Tr A}| e^{Tr A* A / 2}, compared in log space.
struct DetBoundReport {
    int trials = 0;
    int violations = 0;
    double max_log_slack = 0.0;  // max of log lhs - log rhs (<= 0 when the bound holds)
};

// Random dense complex matrices with n cycling through 1..n_max.
DetBoundReport det_bound_check(int trials, int n_max, std::uint64_t seed);

// A = D B with D built from random field pairs on the given torus.
DetBoundReport det_bound_check_fields(const TorusLattice& lat, double E, int trials,
                                      std::uint64_t seed);

// log|det(1 + i sigma_E m_i^2 C)| on the (L, W, E) torus, summed over modes.
double measure_log_abs_det(int L, int W, double E);

struct MeasureBoundReport {
    double fitted_K = 0.0;   // max of (W^2/|Lambda|) log|det| over the fit grid
    double margin = 0.0;
    int trials = 0;
    int violations = 0;      // random instances exceeding margin * fitted_K * |Lambda| / W^2
    double linear_r2 = 0.0;  // R^2 of log|det| vs |Lambda| at fixed (W, E)
    double max_ratio = 0.0;  // worst observed (W^2/|Lambda|) log|det| among trials
};

// Fits K on a (W, L/W, E) grid with L >= W, then draws random instances from
// the same ranges and counts bound violations; also reports the linearity of
// log|det| in the volume.
MeasureBoundReport measure_bound_scan(int trials, double margin, std::uint64_t seed);

// ------------------------------------------------------------------
// Brascamp-Lieb: moments of the quartic-perturbed measure
//   dmu_H ~ e^{-(x, C^{-1} x)/2 - lambda sum_j x_j^4 / 2}
// never exceed the Gaussian dmu_C moments. Estimated by exact reweighting
// E_H[f] = E_C[f u] / E_C[u] with u = e^{-lambda sum x^4 / 2}.
struct BrascampLiebRow {
    double lambda = 0.0;
    double m2_est = 0.0, m2_se = 0.0, m2_gauss = 0.0;  // E[x_0^2]
    double m4_est = 0.0, m4_se = 0.0, m4_gauss = 0.0;  // E[x_0^4]
    double exp_est = 0.0, exp_se = 0.0, exp_gauss = 0.0;  // E[e^{(v,x)}]
    int violations = 0;  // estimates above Gaussian beyond 3 SE
};

std::vector<BrascampLiebRow> brascamp_lieb_check(const TorusLattice& lat, double E,
                                                 const std::vector<double>& lambdas,
                                                 long n_samples, std::uint64_t seed,
                                                 int n_workers = 1);

}  // namespace rbmlab
