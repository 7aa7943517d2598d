#pragma once

#include "jetlag/geodesic.hpp"
#include "jetlag/helmholtz.hpp"
#include "jetlag/identities.hpp"

#include "json.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace jetlag {

class ProblemError : public std::runtime_error {
  public:
    ProblemError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

// One self-describing problem file drives every command. Format: `key = value`
// lines, `#` comments, expressions in the t/x1../y1.. grammar:
//   n = 1
//   G1 = y1 + x1/2
//   theta0 = exp(2*t)*(y1^2 - x1^2)/2
//   theta1 = exp(2*t)*y1
//   L = ...                (alternative to the theta block)
//   seed/probes/tol        (verdict settings)
//   t0/t1/h, x0 = a,b  y0 = c,d   (integrator block)
struct ProblemFile {
    int n = 0;
    std::vector<std::string> g_src;
    std::optional<std::string> theta0_src;
    std::vector<std::string> theta_src;
    std::optional<std::string> lagrangian_src;
    std::optional<std::uint64_t> seed;
    std::optional<int> probes;
    std::optional<double> tol;
    std::optional<double> t0, t1, h;
    std::optional<std::vector<double>> x0, y0;

    bool has_theta() const { return theta0_src.has_value(); }
    bool has_lagrangian() const { return lagrangian_src.has_value(); }
    bool has_integrator() const { return t0 && t1 && h && x0 && y0; }

    Semispray semispray() const;
    SemiBasicOneForm theta() const;
    Lagrangian lagrangian() const;
    IntegratorConfig integrator() const;
    Point initial_point() const;
};

ProblemFile parse_problem(std::istream& in, const std::string& name);
ProblemFile load_problem(const std::string& path);

// JSON report documents; serialization is deterministic for a fixed seed.
nlohmann::json verdict_json(const ZeroVerdict& v);
nlohmann::json condition_json(const ConditionReport& c);
nlohmann::json helmholtz_report_json(const HelmholtzReport& rep);
nlohmann::json identities_json(const std::vector<IdentityResult>& results);
nlohmann::json probe_stats_json(const ZeroTester& tester);

void print_condition(std::ostream& os, const ConditionReport& c);
void print_helmholtz_report(std::ostream& os, const HelmholtzReport& rep);

}  // namespace jetlag
