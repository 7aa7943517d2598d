// End-to-end tests driving the installed binary through a shell, checking the
// exit-code contract (0 pass, 1 mathematical failure, 2 input error) and the
// determinism of JSON reports.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string problem(const std::string& name) { return std::string(JETLAG_PROBLEM_DIR) + "/" + name; }

int run(const std::string& args, std::string* output = nullptr) {
    std::string cmd = std::string(JETLAG_BIN) + " " + args + " >/tmp/jetlag_cli_out.txt 2>&1";
    int rc = std::system(cmd.c_str());
    if (output) {
        std::ifstream in("/tmp/jetlag_cli_out.txt");
        std::ostringstream ss;
        ss << in.rdbuf();
        *output = ss.str();
    }
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("check: damped oscillator passes as a Poincare-Cartan form") {
    std::string out;
    CHECK(run("check " + problem("damped_oscillator.prob"), &out) == 0);
    CHECK(out.find("Poincare-Cartan") != std::string::npos);
}

TEST_CASE("check: asymmetric multiplier exits 1 and names the witness") {
    std::string out;
    CHECK(run("check " + problem("asymmetric_n2.prob"), &out) == 1);
    CHECK(out.find("g_12 - g_21") != std::string::npos);
}

TEST_CASE("check: conservative form reports the first integral") {
    std::string out;
    CHECK(run("check " + problem("free_particle_conservative.prob"), &out) == 0);
    CHECK(out.find("conservative-with-symmetry") != std::string::npos);
    CHECK(out.find("first integral: y1") != std::string::npos);
}

TEST_CASE("check: missing theta block exits 2") {
    std::string out;
    CHECK(run("check " + problem("free_particle.prob"), &out) == 2);
    CHECK(out.find("theta") != std::string::npos);
}

TEST_CASE("check: malformed file exits 2 with a location") {
    std::string path = "/tmp/jetlag_bad.prob";
    std::ofstream(path) << "n = 1\nG1 = y1 +\n";
    std::string out;
    CHECK(run("check " + path, &out) == 2);
    CHECK(out.find("line 2") != std::string::npos);
}

TEST_CASE("from-lagrangian: coupled system derives both coefficients") {
    std::string out;
    CHECK(run("from-lagrangian " + problem("coupled_lagrangian.prob"), &out) == 0);
    CHECK(out.find("G1 = 1/2*x2") != std::string::npos);
    CHECK(out.find("G2 = 1/2*x1") != std::string::npos);
    CHECK(out.find("Poincare-Cartan") != std::string::npos);
}

TEST_CASE("from-lagrangian: damped closed form") {
    std::string path = "/tmp/jetlag_damped_L.prob";
    std::ofstream(path) << "n = 1\nL = exp(2*t)*(y1^2 - x1^2)/2\n";
    std::string out;
    CHECK(run("from-lagrangian " + path, &out) == 0);
    CHECK(out.find("G1 = 1/2*x1 + y1") != std::string::npos);
}

TEST_CASE("from-lagrangian: degenerate Lagrangian exits 1 with the determinant witness") {
    std::string out;
    CHECK(run("from-lagrangian " + problem("degenerate_lagrangian.prob"), &out) == 1);
    CHECK(out.find("det g") != std::string::npos);
}

TEST_CASE("geodesics: harmonic endpoint") {
    std::string out;
    CHECK(run("geodesics " + problem("harmonic_energy.prob") + " /tmp/jetlag_harmonic.csv", &out) == 0);
    std::string csv = slurp("/tmp/jetlag_harmonic.csv");
    CHECK(csv.rfind("t,x1,y1,first_integral,el_residual\n", 0) == 0);
    // final row: x close to -1
    size_t pos = csv.rfind('\n', csv.size() - 2);
    std::string last = csv.substr(pos + 1);
    double t, x;
    REQUIRE(std::sscanf(last.c_str(), "%lf,%lf", &t, &x) == 2);
    CHECK(std::abs(x + 1.0) < 1e-6);
}

TEST_CASE("geodesics: free particle straight line") {
    std::string out;
    CHECK(run("geodesics " + problem("free_particle.prob") + " /tmp/jetlag_free.csv", &out) == 0);
    std::string csv = slurp("/tmp/jetlag_free.csv");
    CHECK(csv.rfind("t,x1,y1\n", 0) == 0);
    CHECK(csv.find("\n2,2,1\n") != std::string::npos);
}

TEST_CASE("geodesics: singular coefficients at t0 exit 2") {
    std::string out;
    CHECK(run("geodesics " + problem("singular_at_origin.prob") + " /tmp/jetlag_sing.csv", &out) == 2);
}

TEST_CASE("geodesics: blow-up exits 1 with the last good time") {
    std::string path = "/tmp/jetlag_blowup.prob";
    std::ofstream(path) << "n = 1\nG1 = -10*x1^3\nt0 = 0\nt1 = 50\nh = 0.01\nx0 = 2\ny0 = 10\n";
    std::string out;
    CHECK(run("geodesics " + path + " /tmp/jetlag_blowup.csv", &out) == 1);
    CHECK(out.find("last good t") != std::string::npos);
}

TEST_CASE("identities command passes on a polynomial semispray") {
    std::string path = "/tmp/jetlag_ident.prob";
    std::ofstream(path) << "n = 2\nG1 = y1*y2 + x1\nG2 = t*y2\n";
    std::string out;
    CHECK(run("identities " + path, &out) == 0);
    CHECK(out.find("all identities hold") != std::string::npos);
    CHECK(out.find("FAIL") == std::string::npos);
}

TEST_CASE("identities: n = 0 is an input error") {
    std::string path = "/tmp/jetlag_n0.prob";
    std::ofstream(path) << "n = 0\n";
    CHECK(run("identities " + path) == 2);
}

TEST_CASE("same seed gives byte-identical JSON reports") {
    for (const char* spec : {"check ", "identities "}) {
        std::string base = std::string(spec) + problem("free_particle_conservative.prob") +
                           " --seed 424242 --json /tmp/jetlag_rep";
        CHECK(run(base + "1.json") == 0);
        CHECK(run(base + "2.json") == 0);
        std::string a = slurp("/tmp/jetlag_rep1.json");
        std::string b = slurp("/tmp/jetlag_rep2.json");
        REQUIRE(!a.empty());
        CHECK(a == b);
    }
    // a different seed still passes but may change probe data
    CHECK(run("check " + problem("free_particle_conservative.prob") +
              " --seed 99 --json /tmp/jetlag_rep3.json") == 0);
}

TEST_CASE("numeric-only mode downgrades proofs to probe verdicts") {
    std::string out;
    CHECK(run("check " + problem("free_particle_conservative.prob") + " --numeric-only", &out) == 0);
    CHECK(out.find("[probes]") != std::string::npos);
    CHECK(out.find("[symbolic]") == std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run("") == 2);
    CHECK(run("check") == 2);
    CHECK(run("check /nonexistent.prob") == 2);
    CHECK(run("frobnicate x") == 2);
}
