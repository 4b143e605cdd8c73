// Runs the acceptance criteria and prints one PASS/FAIL line per criterion.
// Exit status is nonzero when any criterion fails.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bvlab/acceptance.hpp"

int main(int argc, char** argv) {
    CLI::App app{"bvlab acceptance suite"};
    bvlab::AcceptanceOptions opt;
    bool serial = false, details = false;
    app.add_flag("--quick", opt.quick, "reduced grids, tolerances doubled");
    app.add_option("--only", opt.only, "criterion ids to run")->check(CLI::Range(1, bvlab::kCriteria));
    app.add_flag("--serial", serial, "run the serial reference kernels");
    app.add_flag("--details", details, "print per-criterion detail lines");
    CLI11_PARSE(app, argc, argv);
    opt.exec = serial ? bvlab::Exec::serial : bvlab::Exec::parallel;
    bvlab::configure_workers();

    int failed = 0;
    double total = 0.0;
    bvlab::run_acceptance(opt, [&](const bvlab::CriterionResult& r) {
        std::printf("%s\n", bvlab::format_result(r).c_str());
        if (details && !r.detail.empty()) std::printf("     %s\n", r.detail.c_str());
        std::fflush(stdout);
        failed += r.pass ? 0 : 1;
        total += r.seconds;
    });
    std::printf("%s: %d failed, %.1f s total%s\n", failed ? "FAIL" : "PASS", failed, total, opt.quick ? " (quick)" : "");
    return failed ? 1 : 0;
}
