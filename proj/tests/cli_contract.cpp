// End-to-end contract checks for the command-line driver: subcommand
// round trips, output schemas, and the documented exit codes (0 success,
// 1 validation error, 2 I/O error). Invoked by ctest with the binary path
// as the only argument.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "bilr/experiments.hpp"
#include "json.hpp"

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    std::printf("%s %s\n", ok ? "[ok]  " : "[FAIL]", what.c_str());
    if (!ok) ++failures;
}

int exit_code(int system_status) {
#ifdef WEXITSTATUS
    return WEXITSTATUS(system_status);
#else
    return system_status;
#endif
}

int run(const std::string& cmd) { return exit_code(std::system(cmd.c_str())); }

std::string slurp(const std::string& path) { return bilr::read_file(path); }

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_contract <path-to-bilr-binary>\n");
        return 2;
    }
    const std::string cli = argv[1];
    const std::string dir = "cli_contract_tmp";
    if (run("rm -rf " + dir + " && mkdir -p " + dir) != 0) {
        std::fprintf(stderr, "cannot prepare scratch directory\n");
        return 2;
    }

    // generate -> sense -> recover round trip
    expect(run(cli + " generate --n 6 --s 2 --r 1 --seed 5 --out " + dir + "/sig.json 2>/dev/null") == 0,
           "generate exits 0");
    {
        const auto sig = nlohmann::json::parse(slurp(dir + "/sig.json"));
        expect(sig.at("type") == "bilr_matrix" && sig.at("entries").size() == 6,
               "generate emits a 6x6 signal document");
    }
    expect(run(cli + " sense --in " + dir + "/sig.json --m 800 --kind dense --seed 9 --out " +
               dir + "/y.json 2>/dev/null") == 0,
           "sense exits 0");
    {
        const auto y = nlohmann::json::parse(slurp(dir + "/y.json"));
        expect(y.at("bits").size() == 800, "sense emits m bits");
        bool pm1 = true;
        for (const auto& b : y.at("bits")) pm1 = pm1 && (b == 1 || b == -1);
        expect(pm1, "bits are plus or minus one");
    }
    expect(run(cli + " recover --in " + dir + "/y.json --s 2 --r 1 --out " + dir +
               "/xhat.json 2>/dev/null") == 0,
           "recover exits 0");
    {
        const auto xhat = nlohmann::json::parse(slurp(dir + "/xhat.json"));
        expect(xhat.at("scheme") == "pbp" && xhat.at("estimate").size() == 6,
               "recover emits a pbp estimate");
    }

    // factorized round trip
    expect(run(cli + " sense --in " + dir + "/sig.json --m 400 --kind factorized --p 10 --seed 9 --out " +
               dir + "/yf.json 2>/dev/null") == 0 &&
               run(cli + " recover --in " + dir + "/yf.json --s 2 --r 1 --out " + dir +
                   "/xf.json 2>/dev/null") == 0,
           "factorized sense/recover round trip exits 0");
    {
        const auto xf = nlohmann::json::parse(slurp(dir + "/xf.json"));
        expect(xf.at("scheme") == "multistep", "factorized measurements recover via multistep");
    }

    // rip-audit report schema
    expect(run(cli + " rip-audit --kind bilr --n 8 --s 2 --r 1 --m 400 --trials 50 --seed 3 --out " +
               dir + "/rip.json 2>/dev/null") == 0,
           "rip-audit exits 0");
    {
        const auto rip = nlohmann::json::parse(slurp(dir + "/rip.json"));
        expect(rip.contains("ratio_min") && rip.contains("ratio_max") &&
                   rip.contains("ratio_mean") && rip.contains("implied_delta") &&
                   rip.contains("samples") && rip.at("property_kind") == "l1-bilr",
               "rip report carries the declared fields");
    }

    // experiment + fit
    {
        std::ofstream cfg(dir + "/cfg.json");
        cfg << R"({"scheme":"pbp","n":6,"s":2,"r":1,"m_grid":[100,400],)"
            << R"("trials_per_m":5,"master_seed":21})";
    }
    expect(run(cli + " experiment --config " + dir + "/cfg.json --out " + dir +
               "/results.csv 2>/dev/null") == 0,
           "experiment exits 0");
    {
        const std::string csv = slurp(dir + "/results.csv");
        expect(csv.rfind("m,trial,seed,error_raw,error_unit,hamming_consistency_frac,"
                         "wall_time_ms\n", 0) == 0,
               "experiment csv header is exact");
        const std::string again = dir + "/results2.csv";
        run(cli + " experiment --config " + dir + "/cfg.json --out " + again + " 2>/dev/null");
        expect(slurp(dir + "/results.csv") == slurp(again), "experiment output is byte-identical");
    }
    {
        const int code = run(cli + " fit --in " + dir + "/results.csv > " + dir + "/fit.json 2>/dev/null");
        const auto fit = nlohmann::json::parse(slurp(dir + "/fit.json"));
        expect(code == 0 && fit.contains("slope") && fit.contains("intercept"),
               "fit prints slope and intercept as json");
    }

    // json output format
    expect(run(cli + " experiment --config " + dir + "/cfg.json --format json --out " + dir +
               "/results.json 2>/dev/null") == 0 &&
               nlohmann::json::parse(slurp(dir + "/results.json")).is_array(),
           "experiment emits json records on request");

    // error contracts
    expect(run(cli + " experiment --config " + dir + "/missing.json >/dev/null 2>" + dir + "/err.txt") == 2,
           "missing config file exits 2");
    expect(slurp(dir + "/err.txt").find("missing.json") != std::string::npos,
           "missing-config message names the path");
    expect(run(cli + " frobnicate >/dev/null 2>&1") == 1, "unknown subcommand exits 1");
    expect(run(cli + " generate --n 4 --s 5 --r 1 >/dev/null 2>&1") == 1,
           "invalid shape exits 1");
    {
        std::ofstream bad(dir + "/bad.json");
        bad << R"({"scheme":"pbp","n":6,"s":2,"r":1,"m_grid":[100],"trials_per_m":5,)"
            << R"("master_seed":21,"mystery":1})";
    }
    expect(run(cli + " experiment --config " + dir + "/bad.json >/dev/null 2>&1") == 1,
           "unknown config key exits 1");

    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
