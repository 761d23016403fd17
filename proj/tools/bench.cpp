// Kernel benchmark: OpenMP gather kernels against the serial reference
// implementations, with bit-identity checks across thread counts.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dfluid/dynamics.hpp"
#include "dfluid/flat.hpp"
#include "dfluid/reference.hpp"

using namespace dfluid;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace

int main(int argc, char** argv) {
    const Index n = argc > 1 ? static_cast<Index>(std::atol(argv[1])) : 256;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 20;
    const MeshGeometry mesh = build_regular_grid(n, n, 1.0 / n, BoundaryMode::Periodic);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<Real> uni(-1, 1);
    VelocityField A = discretize_from_streamfunction(
        [&](const Vec3& p) {
            return std::sin(2 * M_PI * p.x) * std::cos(4 * M_PI * p.y) +
                   0.3 * std::sin(6 * M_PI * (p.x + p.y));
        },
        mesh);

    int max_threads = 1;
#ifdef _OPENMP
    max_threads = omp_get_max_threads();
#endif
    std::printf("grid %dx%d (%d faces), %d threads available\n", n, n, mesh.face_count(),
                max_threads);

    std::vector<Real> out_serial, out_parallel;

    // advection assembly: gather kernel vs the serial staggered-grid stencil
    set_threads(1);
    const double adv1 = time_ms([&] { out_serial = advection_term(A); }, reps);
    set_threads(max_threads);
    const double advN = time_ms([&] { out_parallel = advection_term(A); }, reps);
    bool bit_equal = out_serial == out_parallel;
    const double advR = time_ms([&] { out_serial = reference::harlow_welsh_advection(A); }, reps);
    Real gap = 0;
    for (Index f = 0; f < mesh.face_count(); ++f)
        gap = std::max(gap, std::abs(out_serial[f] - out_parallel[f]));
    std::printf("advection  : serial %8.3f ms | omp %8.3f ms | speedup %4.2fx | reference %8.3f ms"
                " | bit-identical across threads: %s | vs reference max gap %.3e\n",
                adv1, advN, adv1 / advN, advR, bit_equal ? "yes" : "NO", gap);

    // flat assembly (adjacent values + hinge vorticities)
    set_threads(1);
    FlatAssembly fa1, faN;
    const double fl1 = time_ms([&] { fa1 = flat_adjacent(A); }, reps);
    set_threads(max_threads);
    const double flN = time_ms([&] { faN = flat_adjacent(A); }, reps);
    bit_equal = fa1.adjacent == faN.adjacent && fa1.vorticity == faN.vorticity;
    std::printf("flat       : serial %8.3f ms | omp %8.3f ms | speedup %4.2fx"
                " | bit-identical across threads: %s\n",
                fl1, flN, fl1 / flN, bit_equal ? "yes" : "NO");

    // viscosity apply vs the serial five-point reference
    set_threads(max_threads);
    const double visc = time_ms([&] { out_parallel = viscosity_term(A, 1.0); }, 3);
    const double viscR =
        time_ms([&] { out_serial = reference::five_point_laplacian_flat(A); }, reps);
    gap = 0;
    for (Index f = 0; f < mesh.face_count(); ++f)
        gap = std::max(gap, std::abs(out_serial[f] - out_parallel[f]));
    std::printf("viscosity  : assemble+apply %8.3f ms | reference %8.3f ms | max gap %.3e\n", visc,
                viscR, gap);
    return 0;
}
