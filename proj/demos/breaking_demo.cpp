// Solves the breaking-demo preset, prints the predicted window next to the
// field-level and characteristic blow-up times, and writes the trajectory.
//
//   breaking_demo [out_dir]

#include <burgers_poisson/burgers_poisson.hpp>

#include <cstdio>

int main(int argc, char** argv) {
    auto p = bp::make_preset("breaking-demo");
    p.config.every_step = true;
    const auto traj = bp::solve(p.config, p.u0);

    const double x_bar = *p.steepest_point;
    const bp::LocalBreakingInput in{p.value(x_bar), p.slope(x_bar), traj.l1_initial};
    const auto window = bp::local_window(in);
    const auto field = bp::detect_breaking(traj, 1e3);
    const auto chr = bp::trace_gradient(traj, x_bar, in.slope_at, 1e3);

    std::printf("x_bar            %g\n", x_bar);
    std::printf("condition met    %s\n", window.condition_met ? "yes" : "no");
    std::printf("T_lower          %.6f\n", window.t_lower);
    if (window.t_upper) std::printf("T_upper          %.6f\n", *window.t_upper);
    std::printf("field blow-up    %s\n", field ? bp::format_double(*field).c_str() : "none");
    std::printf("trace blow-up    %s\n", chr.blowup_time ? bp::format_double(*chr.blowup_time).c_str() : "none");

    if (argc > 1) {
        bp::io::write_trajectory(argv[1], traj);
        std::printf("trajectory       %s\n", argv[1]);
    }
    return 0;
}
