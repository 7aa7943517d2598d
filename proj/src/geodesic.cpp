#include "jetlag/geodesic.hpp"

#include <cmath>
#include <ostream>

namespace jetlag {

namespace {

struct State {
    std::vector<double> x;
    std::vector<double> y;
};

// right-hand side: x' = y, y' = -2G(t,x,y)
State deriv(const Semispray& s, double t, const State& u) {
    int n = s.n();
    Point p{t, u.x, u.y};
    State d;
    d.x = u.y;
    d.y.resize(n);
    for (int i = 1; i <= n; ++i) d.y[i - 1] = -2.0 * eval(s.G(i), p);
    return d;
}

State axpy(const State& u, double c, const State& v) {
    State out = u;
    for (size_t i = 0; i < out.x.size(); ++i) {
        out.x[i] += c * v.x[i];
        out.y[i] += c * v.y[i];
    }
    return out;
}

bool finite(const State& u) {
    for (double v : u.x)
        if (!std::isfinite(v)) return false;
    for (double v : u.y)
        if (!std::isfinite(v)) return false;
    return true;
}

}  // namespace

Trajectory integrate(const Semispray& s, const Point& init, const IntegratorConfig& cfg) {
    if (cfg.h <= 0) throw CalcError("integrate: step must be positive");
    if ((cfg.t1 - cfg.t0) / cfg.h < 1.0) throw CalcError("integrate: span must cover at least one step");
    if (init.dim() != s.n()) throw CalcError("integrate: initial condition dimension mismatch");

    Trajectory traj{{}, cfg.h, "rk4", s};
    State u{init.x, init.y};
    double t = cfg.t0;
    traj.samples.push_back(Point{t, u.x, u.y});

    while (t < cfg.t1 - 1e-15 * std::max(1.0, std::abs(cfg.t1))) {
        double h = std::min(cfg.h, cfg.t1 - t);
        try {
            State k1 = deriv(s, t, u);
            State k2 = deriv(s, t + 0.5 * h, axpy(u, 0.5 * h, k1));
            State k3 = deriv(s, t + 0.5 * h, axpy(u, 0.5 * h, k2));
            State k4 = deriv(s, t + h, axpy(u, h, k3));
            for (size_t i = 0; i < u.x.size(); ++i) {
                u.x[i] += h / 6.0 * (k1.x[i] + 2 * k2.x[i] + 2 * k3.x[i] + k4.x[i]);
                u.y[i] += h / 6.0 * (k1.y[i] + 2 * k2.y[i] + 2 * k3.y[i] + k4.y[i]);
            }
        } catch (const EvalError& err) {
            throw IntegrationError(std::string("domain error during integration: ") + err.what(), t);
        }
        if (!finite(u)) throw IntegrationError("state blew up during integration", t);
        t += h;
        traj.samples.push_back(Point{t, u.x, u.y});
    }
    return traj;
}

double el_residual(const ExtractedLagrangian& lag, const Trajectory& traj) {
    const Semispray& s = traj.source;
    int n = s.n();
    double worst = 0.0;
    if (lag.is_symbolic()) {
        std::vector<Expr> residuals(n);
        for (int i = 1; i <= n; ++i)
            residuals[i - 1] = sub(s.apply(diff_y(lag.expr(), i)), diff_x(lag.expr(), i));
        for (const Point& p : traj.samples)
            for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(eval(residuals[i], p)));
        return worst;
    }
    // S(dL/dy^i) - dL/dx^i with the partial derivatives of L evaluated
    // pointwise and the outer derivative taken by central differences along
    // each coordinate direction of S.
    const double h = 1e-5;
    for (const Point& p : traj.samples) {
        for (int i = 1; i <= n; ++i) {
            auto dLdy = [&](const Point& q) { return lag.d_y(q, i); };
            Point pt = p, px = p, py = p;
            pt.t += h;
            double plus = dLdy(pt);
            pt.t -= 2 * h;
            double minus = dLdy(pt);
            double sdldy = (plus - minus) / (2 * h);
            for (int k = 1; k <= n; ++k) {
                px = p;
                px.x[k - 1] += h;
                plus = dLdy(px);
                px.x[k - 1] -= 2 * h;
                minus = dLdy(px);
                sdldy += p.y[k - 1] * (plus - minus) / (2 * h);
                py = p;
                py.y[k - 1] += h;
                plus = dLdy(py);
                py.y[k - 1] -= 2 * h;
                minus = dLdy(py);
                sdldy += -2.0 * eval(s.G(k), p) * (plus - minus) / (2 * h);
            }
            worst = std::max(worst, std::abs(sdldy - lag.d_x(p, i)));
        }
    }
    return worst;
}

double el_residual(const Lagrangian& lag, const Trajectory& traj) {
    return el_residual(ExtractedLagrangian::symbolic(lag.L), traj);
}

double conservation_check(const Expr& f, const Trajectory& traj) {
    return conservation_check([&f](const Point& p) { return eval(f, p); }, traj);
}

double conservation_check(const std::function<double(const Point&)>& f, const Trajectory& traj) {
    if (traj.samples.empty()) return 0.0;
    double first = f(traj.samples.front());
    double worst = 0.0;
    for (const Point& p : traj.samples) worst = std::max(worst, std::abs(f(p) - first));
    return worst;
}

namespace {

void csv_value(std::ostream& os, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

}  // namespace

void write_csv(std::ostream& os, const Trajectory& traj) { write_csv(os, traj, {}, {}); }

void write_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& extra_names,
               const std::vector<std::function<double(const Point&)>>& extra_cols) {
    int n = traj.n();
    os << "t";
    for (int i = 1; i <= n; ++i) os << ",x" << i;
    for (int i = 1; i <= n; ++i) os << ",y" << i;
    for (const std::string& name : extra_names) os << "," << name;
    os << "\n";
    for (const Point& p : traj.samples) {
        csv_value(os, p.t);
        for (int i = 0; i < n; ++i) {
            os << ",";
            csv_value(os, p.x[i]);
        }
        for (int i = 0; i < n; ++i) {
            os << ",";
            csv_value(os, p.y[i]);
        }
        for (const auto& col : extra_cols) {
            os << ",";
            csv_value(os, col(p));
        }
        os << "\n";
    }
}

}  // namespace jetlag
