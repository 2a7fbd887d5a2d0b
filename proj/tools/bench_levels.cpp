// Benchmark: OpenMP level kernels against their serial reference.
// Builds the full induced maps for the catalog transducers at growing
// depths, then times map construction, set images and orbit reach.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "cantor/oracle.hpp"
#include "cantor/system.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace cantor;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        auto t0 = Clock::now();
        f();
        best = std::min(best, ms_since(t0));
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    int min_depth = 16, max_depth = 20, reps = 3;
    if (argc > 1) min_depth = std::stoi(argv[1]);
    if (argc > 2) max_depth = std::stoi(argv[2]);
    if (argc > 3) reps = std::stoi(argv[3]);

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled; parallel variants run serially)\n");
#endif

    const SystemDescription& sys = catalog_entry("odometer");
    GeneratingSet S = sys.generating_set();
    const MealyMachine& m = S.element(1).mealy();
    const int arity = S.alphabet().size();

    std::printf("%-6s %-22s %12s %12s %8s\n", "depth", "kernel", "serial(ms)", "parallel(ms)",
                "speedup");
    for (int depth = min_depth; depth <= max_depth; ++depth) {
        std::size_t n = levels::word_count(arity, depth);

        double t_ser = time_best_of(reps, [&] { levels::induced_map_serial(m, arity, depth); });
        double t_par = time_best_of(reps, [&] { levels::induced_map(m, arity, depth); });
        std::printf("%-6d %-22s %12.2f %12.2f %7.2fx\n", depth, "induced_map", t_ser, t_par,
                    t_ser / t_par);

        auto map = levels::induced_map(m, arity, depth);
        auto inv = levels::invert_map(map);
        levels::Bits set = levels::make_bits(n);
        for (std::size_t i = 0; i < n; i += 3) levels::set_bit(set, i);

        t_ser = time_best_of(reps, [&] { levels::apply_map_serial(set, inv, n); });
        t_par = time_best_of(reps, [&] { levels::apply_map(set, inv, n); });
        std::printf("%-6d %-22s %12.2f %12.2f %7.2fx\n", depth, "apply_map", t_ser, t_par,
                    t_ser / t_par);

        // Wide-frontier reach: the four Grigorchuk generators fan out fast.
        GeneratingSet grig = catalog_entry("grigorchuk").generating_set();
        std::vector<std::vector<std::uint32_t>> maps;
        for (std::size_t i = 1; i < grig.size(); ++i)
            maps.push_back(levels::induced_map(grig.element(i).mealy(), arity, depth));
        t_ser = time_best_of(reps, [&] { levels::reach_serial(0, maps, n); });
        t_par = time_best_of(reps, [&] { levels::reach(0, maps, n); });
        std::printf("%-6d %-22s %12.2f %12.2f %7.2fx\n", depth, "orbit_reach", t_ser, t_par,
                    t_ser / t_par);
    }
    return 0;
}
