#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bvlab/estimates.hpp"
#include "bvlab/parallel.hpp"

namespace bvlab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string measured;   // headline numbers
    std::string threshold;  // what they were compared against
    std::string detail;     // supporting numbers, or the exception text
    double seconds = 0.0;
    double budget = 0.0;  // runtime limit in seconds; exceeding it fails the criterion
};

struct AcceptanceOptions {
    bool quick = false;    // reduced grids, tolerances doubled
    std::vector<int> only;  // empty: all twelve
    Exec exec = Exec::parallel;
};

inline constexpr int kCriteria = 12;

CriterionResult run_criterion(int id, const AcceptanceOptions& opt);
// Runs the selected criteria in order; on_result sees each one as it finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt,
                                            const std::function<void(const CriterionResult&)>& on_result = {});
// Packet xi0 = 4, width 1, centred at -8 on a +-128 box; T = 1.  Jumps live in
// [-4, 4], so the box is >= 8x the coefficient's active range and the leak
// check (1e-6 of the mass in the edge sixteenths) holds through T.
struct StandardRun {
    Grid grid;
    GridFunction u0;
    RunOptions opt;
};
StandardRun smoothing_run(double h = 1.0 / 32.0);
// e^{-x^2/2} centred at `center`, flat group on +-400 with h = 1/4 or CN with h = 1/16.
StandardRun strichartz_run(double T, bool flat, double center = 0.0);

// Flat-group reference quotients keyed "smoothing.s0", "maximal.s0", "maximal.s0.25".
std::map<std::string, double> compute_calibration(Exec exec = Exec::parallel);
inline constexpr int kCalibrationVersion = 1;

// (atan(2aT) / (2 a pi))^{1/8}: L^8_t L^4_x over [-T, T] of the flat flow i u_t + a u_xx
// from e^{-x^2/2}, over the L^2 norm of the datum.
double strichartz_gaussian_oracle(double T, double a);

// "PASS  5 strichartz-scaling  measured ...  threshold ...  (12.3 s)".
std::string format_result(const CriterionResult& r);

}  // namespace bvlab
