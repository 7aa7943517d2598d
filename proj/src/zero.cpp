#include "jetlag/zero.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace jetlag {

std::string Point::str() const {
    std::ostringstream os;
    os.precision(6);
    os << "(t=" << t;
    for (size_t i = 0; i < x.size(); ++i) os << ", x" << i + 1 << "=" << x[i];
    for (size_t i = 0; i < y.size(); ++i) os << ", y" << i + 1 << "=" << y[i];
    os << ")";
    return os.str();
}

namespace {

double eval_rec(const Expr& e, const Point& p, double& maxmag) {
    const ExprNode& n = e.node();
    double v = 0.0;
    switch (n.kind) {
        case ExprKind::Constant:
            v = to_double(n.value);
            break;
        case ExprKind::Variable: {
            if (n.var_kind == VarKind::T) {
                v = p.t;
            } else {
                const auto& vec = n.var_kind == VarKind::X ? p.x : p.y;
                if (n.var_index < 1 || static_cast<size_t>(n.var_index) > vec.size())
                    throw EvalError("variable index exceeds point dimension", e);
                v = vec[n.var_index - 1];
            }
            break;
        }
        case ExprKind::Sum:
            for (const Expr& k : n.kids) v += eval_rec(k, p, maxmag);
            break;
        case ExprKind::Product:
            v = 1.0;
            for (const Expr& k : n.kids) v *= eval_rec(k, p, maxmag);
            break;
        case ExprKind::Power: {
            double b = eval_rec(n.kids[0], p, maxmag);
            double ex = to_double(n.value);
            if (is_integer(n.value)) {
                if (b == 0.0 && n.value < 0) throw EvalError("division by zero", e);
                v = std::pow(b, ex);
            } else {
                if (b < 0.0) throw EvalError("fractional power of a negative value", e);
                if (b == 0.0 && n.value < 0) throw EvalError("division by zero", e);
                v = std::pow(b, ex);
            }
            break;
        }
        case ExprKind::Function: {
            double a = eval_rec(n.kids[0], p, maxmag);
            switch (n.func) {
                case Func::Sin: v = std::sin(a); break;
                case Func::Cos: v = std::cos(a); break;
                case Func::Exp: v = std::exp(a); break;
                case Func::Ln:
                    if (a <= 0.0) throw EvalError("logarithm of a non-positive value", e);
                    v = std::log(a);
                    break;
            }
            break;
        }
    }
    maxmag = std::max(maxmag, std::abs(v));
    return v;
}

}  // namespace

double eval(const Expr& e, const Point& p) {
    double mag = 0.0;
    return eval_rec(e, p, mag);
}

double eval_tracked(const Expr& e, const Point& p, double& max_magnitude) {
    max_magnitude = 0.0;
    return eval_rec(e, p, max_magnitude);
}

ZeroVerdict ZeroVerdict::proven_zero() {
    ZeroVerdict v;
    v.status_ = Status::ProvenZero;
    return v;
}

ZeroVerdict ZeroVerdict::probably_zero(int probes, double max_abs) {
    ZeroVerdict v;
    v.status_ = Status::ProbablyZero;
    v.probes_ = probes;
    v.max_abs_ = max_abs;
    return v;
}

ZeroVerdict ZeroVerdict::non_zero(Witness w) {
    ZeroVerdict v;
    v.status_ = Status::NonZero;
    v.max_abs_ = std::abs(w.value);
    v.witness_ = std::move(w);
    return v;
}

std::string ZeroVerdict::str() const {
    std::ostringstream os;
    switch (status_) {
        case Status::ProvenZero:
            os << "zero (symbolic)";
            break;
        case Status::ProbablyZero:
            os << "zero (" << probes_ << " probes, max |value| " << max_abs_ << ")";
            break;
        case Status::NonZero:
            os << "nonzero: value " << witness_->value << " at " << witness_->point.str();
            break;
    }
    return os.str();
}

ZeroTester::ZeroTester(int n, int probes, double tol, std::uint64_t seed)
    : n_(n), probes_(probes), tol_(tol), seed_(seed), rng_(seed) {
    if (n < 1) throw std::invalid_argument("ZeroTester: dimension must be >= 1");
    if (probes < 1) throw std::invalid_argument("ZeroTester: probe count must be >= 1");
}

namespace {

double unit_from_bits(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;  // [0,1)
}

}  // namespace

Point ZeroTester::random_point() {
    Point p;
    p.x.resize(n_);
    p.y.resize(n_);
    p.t = unit_from_bits(rng_()) * 4.0 - 2.0;
    for (int i = 0; i < n_; ++i) p.x[i] = unit_from_bits(rng_()) * 4.0 - 2.0;
    for (int i = 0; i < n_; ++i) p.y[i] = unit_from_bits(rng_()) * 4.0 - 2.0;
    return p;
}

ZeroVerdict ZeroTester::test(const Expr& e) {
    if (!numeric_only_ && e.is_zero()) {
        ++stats_.calls;
        ++stats_.proven;
        return ZeroVerdict::proven_zero();
    }
    return test_fn([&e](const Point& p, double& scale) { return eval_rec(e, p, scale); });
}

ZeroVerdict ZeroTester::test_fn(const std::function<double(const Point&, double&)>& f) {
    ++stats_.calls;

    struct Probe {
        Point p;
        double value = 0.0;
        double scale = 0.0;
        bool valid = false;
    };

    std::vector<Probe> good;
    good.reserve(probes_);
    int drawn = 0;
    const int budget = probes_ * 10;

    // Candidates are drawn (and consumed from the RNG) in deterministic
    // chunks; each chunk is evaluated as a batch so the parallel and serial
    // paths see identical points.
    while (static_cast<int>(good.size()) < probes_ && drawn < budget) {
        int want = probes_ - static_cast<int>(good.size());
        int chunk = std::min(want, budget - drawn);
        std::vector<Probe> batch(chunk);
        for (int i = 0; i < chunk; ++i) batch[i].p = random_point();
        drawn += chunk;

        auto eval_one = [&](Probe& pr) {
            try {
                double mag = 0.0;
                pr.value = f(pr.p, mag);
                pr.scale = mag;
                pr.valid = std::isfinite(pr.value) && std::isfinite(mag);
            } catch (const EvalError&) {
                pr.valid = false;
            }
        };

#ifdef _OPENMP
        if (parallel_) {
#pragma omp parallel for schedule(dynamic)
            for (int i = 0; i < chunk; ++i) eval_one(batch[i]);
        } else {
            for (int i = 0; i < chunk; ++i) eval_one(batch[i]);
        }
#else
        for (int i = 0; i < chunk; ++i) eval_one(batch[i]);
#endif

        stats_.probe_evals += chunk;
        for (Probe& pr : batch) {
            if (pr.valid)
                good.push_back(std::move(pr));
            else
                ++stats_.resamples;
        }
    }

    if (static_cast<int>(good.size()) < probes_) throw ProbeExhausted(probes_, static_cast<int>(good.size()));

    double max_abs = 0.0;
    for (const Probe& pr : good) {
        if (std::abs(pr.value) > tol_ * (1.0 + pr.scale)) {
            ++stats_.nonzero;
            return ZeroVerdict::non_zero(Witness{pr.p, pr.value});
        }
        max_abs = std::max(max_abs, std::abs(pr.value));
    }
    ++stats_.probably;
    return ZeroVerdict::probably_zero(static_cast<int>(good.size()), max_abs);
}

}  // namespace jetlag
