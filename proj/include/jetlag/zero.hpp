#pragma once

#include "jetlag/expr.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace jetlag {

/// A point of the first jet bundle in coordinates (t, x^i, y^i).
struct Point {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> y;

    int dim() const { return static_cast<int>(x.size()); }
    std::string str() const;
};

/// ln/sqrt outside their domain or a division by zero, reported with the
/// offending subtree.
class EvalError : public std::runtime_error {
  public:
    EvalError(const std::string& what, Expr subtree)
        : std::runtime_error(what + " in subexpression " + subtree.str()), subtree_(std::move(subtree)) {}
    const Expr& subtree() const { return subtree_; }

  private:
    Expr subtree_;
};

double eval(const Expr& e, const Point& p);
/// Same, but also records the largest |value| over all subexpressions.
double eval_tracked(const Expr& e, const Point& p, double& max_magnitude);

struct Witness {
    Point point;
    double value = 0.0;
};

class ZeroVerdict {
  public:
    enum class Status { ProvenZero, ProbablyZero, NonZero };

    static ZeroVerdict proven_zero();
    static ZeroVerdict probably_zero(int probes, double max_abs);
    static ZeroVerdict non_zero(Witness w);

    Status status() const { return status_; }
    bool is_zero() const { return status_ != Status::NonZero; }
    bool proven() const { return status_ == Status::ProvenZero; }
    int probes() const { return probes_; }
    double max_abs() const { return max_abs_; }
    const std::optional<Witness>& witness() const { return witness_; }
    std::string str() const;

  private:
    Status status_ = Status::ProvenZero;
    int probes_ = 0;
    double max_abs_ = 0.0;
    std::optional<Witness> witness_;
};

class ProbeExhausted : public std::runtime_error {
  public:
    ProbeExhausted(int wanted, int found)
        : std::runtime_error("zero test: only " + std::to_string(found) + " of " + std::to_string(wanted) +
                             " probe points were evaluable") {}
};

struct ProbeStats {
    long long calls = 0;
    long long probe_evals = 0;
    long long resamples = 0;
    long long proven = 0;
    long long probably = 0;
    long long nonzero = 0;
};

/// Tri-state zero test: a canonical zero is proven; anything else is probed
/// at random points of [-2,2]^(2n+1), resampling on domain errors with at
/// most 10x oversampling. Probe batches evaluate in parallel when OpenMP is
/// enabled; `parallel=false` forces the serial reference path, which produces
/// identical verdicts.
class ZeroTester {
  public:
    ZeroTester(int n, int probes = 32, double tol = 1e-9, std::uint64_t seed = 1);

    ZeroVerdict test(const Expr& e);

    /// Probe-only test of an arbitrary evaluator. The callable returns the
    /// value at a point and stores a magnitude scale for the tolerance; it
    /// signals an invalid point by throwing EvalError.
    ZeroVerdict test_fn(const std::function<double(const Point&, double&)>& f);

    int n() const { return n_; }
    int probes() const { return probes_; }
    double tol() const { return tol_; }
    std::uint64_t seed() const { return seed_; }
    const ProbeStats& stats() const { return stats_; }

    void set_parallel(bool on) { parallel_ = on; }
    /// Probe-based verdicts only: the structural short-circuit is disabled and
    /// every expression is sampled, so ProvenZero is never reported.
    void set_numeric_only(bool on) { numeric_only_ = on; }
    bool numeric_only() const { return numeric_only_; }

    Point random_point();

  private:
    int n_;
    int probes_;
    double tol_;
    std::uint64_t seed_;
    bool parallel_ = true;
    bool numeric_only_ = false;
    std::mt19937_64 rng_;
    ProbeStats stats_;
};

}  // namespace jetlag
