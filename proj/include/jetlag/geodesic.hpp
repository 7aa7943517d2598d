#pragma once

#include "jetlag/helmholtz.hpp"
#include "jetlag/semispray.hpp"
#include "jetlag/zero.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace jetlag {

// Numeric harness: integrates x'' + 2G(t,x,x') = 0 with classical fixed-step
// RK4 and evaluates Euler-Lagrange residuals and first-integral drift along
// the resulting trajectories.

struct IntegratorConfig {
    double t0 = 0.0;
    double t1 = 1.0;
    double h = 1e-3;
};

class IntegrationError : public std::runtime_error {
  public:
    IntegrationError(const std::string& what, double last_good_t)
        : std::runtime_error(what + " (last good t = " + std::to_string(last_good_t) + ")"),
          last_good_t_(last_good_t) {}
    double last_good_t() const { return last_good_t_; }

  private:
    double last_good_t_;
};

struct Trajectory {
    std::vector<Point> samples;  // strictly increasing t
    double step = 0.0;
    std::string method = "rk4";
    Semispray source;  // the semispray that generated the samples

    int n() const { return source.n(); }
};

/// Fixed-step RK4 on (x, y) with y = x'; the final partial step lands exactly
/// on t1. Throws IntegrationError on a domain error or non-finite state.
Trajectory integrate(const Semispray& s, const Point& init, const IntegratorConfig& cfg);

/// max_i max_k | S(dL/dy^i) - dL/dx^i | over the samples; the time derivative
/// is taken through the generating SODE, so integrator error does not enter.
double el_residual(const ExtractedLagrangian& lag, const Trajectory& traj);
double el_residual(const Lagrangian& lag, const Trajectory& traj);

/// max_k |f(sample_k) - f(sample_0)|.
double conservation_check(const Expr& f, const Trajectory& traj);
double conservation_check(const std::function<double(const Point&)>& f, const Trajectory& traj);

/// CSV with header t,x1..xN,y1..yN and 17 significant digits per value.
void write_csv(std::ostream& os, const Trajectory& traj);
/// Same with extra named columns evaluated per sample.
void write_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& extra_names,
               const std::vector<std::function<double(const Point&)>>& extra_cols);

}  // namespace jetlag
