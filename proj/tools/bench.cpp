// Benchmark for the probe-evaluation kernel: the same batched zero tests run
// once through the serial reference path and once through the OpenMP path.

#include "jetlag/identities.hpp"
#include "jetlag/parser.hpp"
#include "jetlag/zero.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace jetlag;

namespace {

double now() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::vector<Expr> residual_corpus(int n, int count, std::uint64_t seed) {
    // residuals that canonical simplification cannot discharge, so every one
    // of them exercises the probing loop
    std::mt19937_64 rng(seed);
    std::vector<Expr> out;
    Expr pyth = parse_expr("sin(t)^2 + cos(t)^2 - 1", n);
    for (int k = 0; k < count; ++k) {
        Expr p = random_polynomial(rng, n);
        Expr q = random_polynomial(rng, n);
        // p*q - q*p vanishes structurally; scale the Pythagorean residual by a
        // random polynomial to keep the evaluator honest
        out.push_back(mul(add(p, Expr::integer(1)), pyth));
        out.push_back(mul(q, pyth));
    }
    return out;
}

double run_batch(const std::vector<Expr>& corpus, int n, int probes, bool parallel, long long& verdicts) {
    ZeroTester tester(n, probes, 1e-9, 12345);
    tester.set_parallel(parallel);
    double start = now();
    verdicts = 0;
    for (const Expr& e : corpus) {
        ZeroVerdict v = tester.test(e);
        if (v.is_zero()) ++verdicts;
    }
    return now() - start;
}

}  // namespace

int main(int argc, char** argv) {
    int probes = argc > 1 ? std::atoi(argv[1]) : 4096;
    int exprs = argc > 2 ? std::atoi(argv[2]) : 24;
    int n = 3;

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both rows use the serial path\n");
#endif
    std::printf("probe kernel: %d expressions, %d probes each, n=%d\n\n", 2 * exprs, probes, n);

    std::vector<Expr> corpus = residual_corpus(n, exprs, 99);

    long long ok_serial = 0, ok_parallel = 0;
    double t_serial = run_batch(corpus, n, probes, false, ok_serial);
    double t_parallel = run_batch(corpus, n, probes, true, ok_parallel);

    std::printf("%-18s %10.3f s   (%lld zero verdicts)\n", "serial reference", t_serial, ok_serial);
    std::printf("%-18s %10.3f s   (%lld zero verdicts)\n", "openmp", t_parallel, ok_parallel);
    if (t_parallel > 0) std::printf("%-18s %10.2fx\n", "speedup", t_serial / t_parallel);

    if (ok_serial != ok_parallel) {
        std::printf("verdict mismatch between paths!\n");
        return 1;
    }
    return 0;
}
