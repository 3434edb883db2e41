#include <chrono>
#include <cstdlib>
#include <iostream>
#include <random>

#include <omp.h>

#include <affhom/series.hpp>

using namespace affhom;

namespace {

RSeries random_dense(int vars, int bound, std::mt19937& rng)
{
    std::uniform_int_distribution<int> num(-50, 50);
    std::uniform_int_distribution<int> den(1, 12);
    RSeries s(vars, bound);
    for (int d = 0; d <= bound; ++d) {
        for_each_of_degree(vars, d, [&](const Exponents& e) { s.set(e, ratio(num(rng), den(rng))); });
    }
    return s;
}

template <class Fn>
double seconds(Fn&& fn, int reps)
{
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) {
        fn();
    }
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

} // namespace

int main(int argc, char** argv)
{
    const int reps = argc > 1 ? std::atoi(argv[1]) : 3;
    std::mt19937 rng(20240611);
    std::cout << "threads: " << omp_get_max_threads() << "\n";
    std::cout << "vars bound terms serial_s parallel_s speedup\n";
    for (const auto& [vars, bound] : {std::pair{2, 24}, std::pair{3, 14}, std::pair{4, 10}}) {
        const RSeries a = random_dense(vars, bound, rng);
        const RSeries b = random_dense(vars, bound, rng);
        RSeries serial;
        RSeries parallel;
        const double ts = seconds([&] { serial = series_mul_serial(a, b); }, reps);
        const double tp = seconds([&] { parallel = series_mul_parallel(a, b); }, reps);
        if (!(serial == parallel)) {
            std::cerr << "kernels disagree at vars=" << vars << " bound=" << bound << "\n";
            return 1;
        }
        std::cout << vars << " " << bound << " " << a.terms().size() << " " << ts << " " << tp << " " << ts / tp
                  << "\n";
    }
    return 0;
}
