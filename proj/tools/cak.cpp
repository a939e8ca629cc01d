// cak: build, verify and tabulate Calogero / LLL-anyon states and the
// convolution-kernel mapping between them. JSON on stdout (or --out), human
// summary on stderr. Exit codes: 0 pass, 1 verification failure, 2 usage or
// validation error, 3 resource budget exceeded.

#include <complex>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cak/anyon.hpp"
#include "cak/calogero.hpp"
#include "cak/kernel_map.hpp"
#include "cak/scattering.hpp"
#include "json.hpp"

using namespace cak;
using OrderedJson = nlohmann::ordered_json;

namespace {

struct RunConfig {
    int n = 2;
    std::string g = "1";
    std::string alpha;
    std::string ell = "0,0";
    std::string model = "calogero";
    std::string suite = "all";
    double tol = 0.0;  // 0: per-suite default
    int gridPoints = 0;
    double boxRadius = 0.0;
    std::uint64_t zSeed = 20240001;
    int zSamples = 8;
    std::string outPath;
};

std::vector<int> parseEll(const std::string& text, int n) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    if (static_cast<int>(out.size()) != n)
        throw ValidationError("ell must list exactly n values, got: " + text);
    return out;
}

int parseIntegerCoupling(const std::string& text) {
    Rational g = ratParse(text);
    if (!ratIsInteger(g) || g < 0) throw ValidationError("integer coupling g >= 0 required: " + text);
    return static_cast<int>(g.get_num().get_si());
}

void emit(const RunConfig& cfg, const OrderedJson& j) {
    std::string text = j.dump(2);
    if (cfg.outPath.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(cfg.outPath);
        if (!out) throw std::runtime_error("cannot open output file: " + cfg.outPath);
        out << text << "\n";
        std::cerr << "report written to " << cfg.outPath << "\n";
    }
}

WedgeOptions wedgeOptions(const RunConfig& cfg) {
    WedgeOptions o;
    if (cfg.gridPoints > 0) o.ghPoints = cfg.gridPoints;
    if (cfg.boxRadius > 0) o.boxRadius = cfg.boxRadius;
    return o;
}

// ---- verify suites --------------------------------------------------------

bool runEigenSuite(const RunConfig& cfg, OrderedJson& out) {
    int g = parseIntegerCoupling(cfg.g);
    ScatteringState h = buildScatteringSymbolic(cfg.n, g);
    EigenReport er = checkEigen(h);
    SwapReport sr = checkSwapSymmetry(h);
    out["n"] = cfg.n;
    out["g"] = g;
    out["eigen_residual_terms"] = er.residualTerms;
    out["eigen_pass"] = er.pass;
    out["swap_pass"] = sr.swapExact;
    out["s_structure_pass"] = sr.sStructure;
    bool pass = er.pass && sr.pass;
    std::cerr << "eigen(" << cfg.n << "," << g << "): " << (pass ? "pass" : "FAIL") << "\n";
    return pass;
}

bool runIntertwineSuite(const RunConfig& cfg, OrderedJson& out) {
    int g = parseIntegerCoupling(cfg.g);
    bool c = intertwinerConstantCheck(cfg.n, g);
    bool r = intertwiningRelationCheck(cfg.n, g);
    out["n"] = cfg.n;
    out["g"] = g;
    out["constant_pass"] = c;
    out["relation_pass"] = r;
    std::cerr << "intertwine(" << cfg.n << "," << g << "): " << (c && r ? "pass" : "FAIL") << "\n";
    return c && r;
}

bool runMapSuite(const RunConfig& cfg, OrderedJson& out) {
    int g = parseIntegerCoupling(cfg.g);
    std::vector<int> ell = parseEll(cfg.ell, cfg.n);
    double tol = cfg.tol > 0 ? cfg.tol : (cfg.n >= 3 ? 1e-3 : 1e-6);
    auto zs = sampleZTuples(cfg.n, cfg.zSamples, cfg.zSeed);
    MappingReport rep = verifyMapping(cfg.n, g, ell, zs, tol, wedgeOptions(cfg));
    out = OrderedJson::parse(mappingReportToJson(rep));
    out["z_seed"] = cfg.zSeed;
    std::cerr << "map(n=" << cfg.n << ",g=" << g << ",ell=" << cfg.ell
              << "): max rel err " << rep.maxRelErr << " -> " << (rep.pass ? "pass" : "FAIL") << "\n";
    return rep.pass;
}

bool runBoundarySuite(const RunConfig& cfg, OrderedJson& out) {
    double g = ratParse(cfg.g).get_d();
    std::vector<int> ell = parseEll(cfg.ell, cfg.n);
    int l = ell.empty() ? 1 : std::max(1, ell.back());
    BoundaryReport reg = boundaryTermCheck(g, l);
    auto jsonOf = [](const BoundaryReport& r) {
        OrderedJson j;
        j["g"] = r.g;
        j["ell"] = r.ell;
        j["irregular"] = r.irregularSolution;
        j["slope_piece_b"] = r.slopeB;
        j["slope_piece_c"] = r.slopeC;
        j["slope_difference"] = r.slopeDiff;
        j["expected_piece"] = r.expectedPiece;
        j["expected_difference"] = r.expectedDiff;
        j["difference_limit"] = {r.diffLimit.real(), r.diffLimit.imag()};
        j["pass"] = r.pass;
        return j;
    };
    out["regular"] = jsonOf(reg);
    bool pass = reg.pass;
    if (std::abs(g - 0.5) > 1e-12) {
        BoundaryReport irr = boundaryTermCheckIrregular(g, l);
        out["irregular"] = jsonOf(irr);
        pass = pass && irr.pass;
    }
    std::cerr << "boundary(g=" << g << ",ell=" << l << "): " << (pass ? "pass" : "FAIL") << "\n";
    return pass;
}

bool runSpectrumSuite(const RunConfig&, OrderedJson& out) {
    bool pass = true;
    // affine in alpha with slope omega N(N-1)/2
    for (int n = 2; n <= 4; ++n) {
        std::vector<int> ell(n, 1);
        double e0 = anyonEnergy(n, 0.0, ell, {1.0, 0.0});
        double e1 = anyonEnergy(n, 0.5, ell, {1.0, 0.0});
        double e2 = anyonEnergy(n, 1.0, ell, {1.0, 0.0});
        pass = pass && std::abs((e2 - e1) - (e1 - e0)) < 1e-12 &&
               std::abs((e1 - e0) - 0.25 * n * (n - 1)) < 1e-12;
    }
    // Bose/Fermi endpoints under the staircase shift
    for (int n = 2; n <= 4; ++n) {
        std::vector<int> ell(n, 0);
        ell[n - 1] = 2;
        std::vector<int> shifted = ell;
        for (int k = 0; k < n; ++k) shifted[k] += k;
        pass = pass && std::abs(anyonEnergy(n, 1.0, ell, {1.0, 0.0}) -
                                anyonEnergy(n, 0.0, shifted, {1.0, 0.0})) < 1e-12;
    }
    // omega = 0 degeneracy: E = N omega_c for any alpha, ell
    for (double alpha : {0.0, 0.37, 1.0})
        pass = pass && std::abs(anyonEnergy(3, alpha, {0, 1, 4}, {0.0, 1.3}) - 3 * 1.3) < 1e-12;
    // degeneracy counts against brute force
    for (int n = 1; n <= 5 && pass; ++n) {
        for (int total = 0; total <= 10; ++total) {
            long brute = 0;
            std::vector<int> cur(n, 0);
            auto rec = [&](auto&& self, int pos, int minVal, int left) -> void {
                if (pos == n) {
                    if (left == 0) ++brute;
                    return;
                }
                for (int v = minVal; v <= left; ++v) {
                    cur[pos] = v;
                    self(self, pos + 1, v, left - v);
                }
            };
            rec(rec, 0, 0, total);
            if (countDegeneracy(n, total) != brute) pass = false;
        }
    }
    out["pass"] = pass;
    std::cerr << "spectrum properties: " << (pass ? "pass" : "FAIL") << "\n";
    return pass;
}

bool runAllSuites(const RunConfig& cfg, OrderedJson& out) {
    bool pass = true;
    OrderedJson parts = OrderedJson::array();
    auto record = [&](const std::string& name, bool ok, OrderedJson j) {
        j["suite"] = name;
        j["pass"] = ok;
        parts.push_back(j);
        pass = pass && ok;
    };

    for (auto [n, g] : {std::pair{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}}) {
        RunConfig c = cfg;
        c.n = n;
        c.g = std::to_string(g);
        OrderedJson j;
        record("eigen", runEigenSuite(c, j), j);
    }
    for (int n = 2; n <= 3; ++n)
        for (int g = 0; g <= 2; ++g) {
            RunConfig c = cfg;
            c.n = n;
            c.g = std::to_string(g);
            OrderedJson j;
            record("intertwine", runIntertwineSuite(c, j), j);
        }
    for (auto [n, g, ell] : {std::tuple<int, int, const char*>{2, 1, "0,2"},
                             {2, 2, "0,1"},
                             {3, 1, "0,0,1"}}) {
        RunConfig c = cfg;
        c.n = n;
        c.g = std::to_string(g);
        c.ell = ell;
        c.zSamples = std::min(cfg.zSamples, 4);
        OrderedJson j;
        record("map", runMapSuite(c, j), j);
    }
    for (const char* g : {"1", "1/2", "2"}) {
        RunConfig c = cfg;
        c.g = g;
        c.ell = c.n == 2 ? "0,1" : c.ell;
        c.n = 2;
        c.ell = "0,1";
        OrderedJson j;
        record("boundary", runBoundarySuite(c, j), j);
    }
    {
        OrderedJson j;
        record("spectrum", runSpectrumSuite(cfg, j), j);
    }
    out["suites"] = parts;
    out["pass"] = pass;
    return pass;
}

// ---- commands --------------------------------------------------------------

int commandBuildState(const RunConfig& cfg) {
    OrderedJson j;
    if (cfg.model == "calogero") {
        int g = parseIntegerCoupling(cfg.g);
        CalogeroState s = buildState(cfg.n, g, parseEll(cfg.ell, cfg.n));
        j = OrderedJson::parse(calogeroStateToJson(s));
        std::cerr << "calogero state n=" << cfg.n << " g=" << g << " energy=" << ratToString(s.energy)
                  << " terms=" << s.body.termCount() << "\n";
    } else if (cfg.model == "anyon") {
        Rational alpha = ratParse(cfg.alpha.empty() ? cfg.g : cfg.alpha);
        AnyonState s = lllState(cfg.n, alpha, parseEll(cfg.ell, cfg.n));
        j = OrderedJson::parse(anyonStateToJson(s));
        std::cerr << "anyon state n=" << cfg.n << " alpha=" << ratToString(alpha)
                  << " L=" << ratToString(s.angularMomentum()) << "\n";
    } else {
        throw ValidationError("unknown model: " + cfg.model);
    }
    emit(cfg, j);
    return 0;
}

int commandVerify(const RunConfig& cfg) {
    OrderedJson j;
    bool pass = false;
    if (cfg.suite == "eigen")
        pass = runEigenSuite(cfg, j);
    else if (cfg.suite == "intertwine")
        pass = runIntertwineSuite(cfg, j);
    else if (cfg.suite == "map")
        pass = runMapSuite(cfg, j);
    else if (cfg.suite == "boundary")
        pass = runBoundarySuite(cfg, j);
    else if (cfg.suite == "spectrum")
        pass = runSpectrumSuite(cfg, j);
    else if (cfg.suite == "all")
        pass = runAllSuites(cfg, j);
    else
        throw ValidationError("unknown suite: " + cfg.suite);
    j["pass"] = pass;
    emit(cfg, j);
    std::cerr << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 1;
}

int commandSpectrum(const RunConfig& cfg, const std::string& alphaSteps, int maxExcitation,
                    double omega, double omegaC, int countDegeneracyTotal) {
    OrderedJson j;
    if (countDegeneracyTotal >= 0) {
        j["n"] = cfg.n;
        j["total"] = countDegeneracyTotal;
        j["degeneracy"] = countDegeneracy(cfg.n, countDegeneracyTotal);
        emit(cfg, j);
        return 0;
    }
    std::vector<double> alphas;
    std::stringstream ss(alphaSteps);
    std::string item;
    while (std::getline(ss, item, ',')) alphas.push_back(std::stod(item));
    if (alphas.empty()) throw ValidationError("no alpha steps given");

    SpectrumParams params{omega, omegaC};
    params.validate();
    OrderedJson rows = OrderedJson::array();
    std::vector<int> cur(cfg.n, 0);
    auto rec = [&](auto&& self, int pos, int minVal, int left) -> void {
        if (pos == cfg.n) {
            for (double a : alphas) {
                OrderedJson row;
                row["n"] = cfg.n;
                row["alpha"] = a;
                row["ell"] = cur;
                row["omega"] = omega;
                row["omegaC"] = omegaC;
                row["energy"] = anyonEnergy(cfg.n, a, cur, params);
                rows.push_back(row);
            }
            return;
        }
        for (int v = minVal; v <= left; ++v) {
            cur[pos] = v;
            self(self, pos + 1, v, left - v);
        }
    };
    rec(rec, 0, 0, maxExcitation);
    j["rows"] = rows;
    emit(cfg, j);
    std::cerr << rows.size() << " spectrum rows\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Calogero / LLL-anyon state construction and kernel-mapping verification"};
    RunConfig cfg;

    auto addCommon = [&cfg](CLI::App* cmd) {
        cmd->set_config("--config");
        cmd->add_option("--n", cfg.n, "particle count")->check(CLI::Range(1, 6));
        cmd->add_option("--g", cfg.g, "coupling (rational, e.g. 1 or 1/2)");
        cmd->add_option("--alpha", cfg.alpha, "statistical parameter (anyon model)");
        cmd->add_option("--ell", cfg.ell, "comma-separated quantum numbers");
        cmd->add_option("--tol", cfg.tol, "verification tolerance (0 = per-suite default)");
        cmd->add_option("--grid-points", cfg.gridPoints, "Hermite tensor base order");
        cmd->add_option("--box-radius", cfg.boxRadius, "wedge panel base radius");
        cmd->add_option("--z-seed", cfg.zSeed, "seed for the z-sample PRNG (mt19937_64)");
        cmd->add_option("--z-samples", cfg.zSamples, "number of z samples");
        cmd->add_option("--out", cfg.outPath, "write the JSON report to this file");
    };

    CLI::App* build = app.add_subcommand("build-state", "construct a state and write it as JSON");
    build->add_option("--model", cfg.model, "calogero | anyon");
    addCommon(build);

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", cfg.suite, "map | eigen | intertwine | boundary | spectrum | all");
    addCommon(verify);

    CLI::App* spectrum = app.add_subcommand("spectrum", "emit an energy/degeneracy table");
    std::string alphaSteps = "0,0.5,1";
    int maxExcitation = 2;
    double omega = 1.0, omegaC = 0.0;
    int countDegeneracyTotal = -1;
    spectrum->add_option("--alpha-steps", alphaSteps, "comma-separated alpha values");
    spectrum->add_option("--max-excitation", maxExcitation, "max total excitation");
    spectrum->add_option("--omega", omega, "trap frequency");
    spectrum->add_option("--omega-c", omegaC, "half cyclotron frequency");
    spectrum->add_option("--count-degeneracy", countDegeneracyTotal,
                         "print the degeneracy of this excitation total and exit");
    addCommon(spectrum);

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (build->parsed()) return commandBuildState(cfg);
        if (verify->parsed()) return commandVerify(cfg);
        if (spectrum->parsed())
            return commandSpectrum(cfg, alphaSteps, maxExcitation, omega, omegaC, countDegeneracyTotal);
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
