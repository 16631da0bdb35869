// Experiment driver for one-bit bisparse low-rank recovery: signal
// generation, sensing, recovery, RIP audits, Monte-Carlo sweeps over the
// measurement count, and decay-rate fits.

#include <omp.h>

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "bilr/diagnostics.hpp"
#include "bilr/experiments.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

json matrix_to_json(const bilr::Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

bilr::Matrix matrix_from_json(const json& j) {
    const std::size_t rows = j.size();
    const std::size_t cols = rows == 0 ? 0 : j.at(0).size();
    bilr::Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
    return m;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text << '\n';
    else
        bilr::write_file(out_path, text + "\n");
}

struct GenerateArgs {
    int n = 8, s = 2, r = 1;
    std::uint64_t seed = 0;
    std::string out;
};

int run_generate(const GenerateArgs& a) {
    const bilr::BilrMatrix x = bilr::generate_bilr(a.n, a.s, a.r, a.seed);
    json j;
    j["type"] = "bilr_matrix";
    j["n"] = a.n;
    j["s"] = a.s;
    j["r"] = a.r;
    j["seed"] = a.seed;
    j["row_support"] = x.row_support;
    j["col_support"] = x.col_support;
    j["entries"] = matrix_to_json(x.dense());
    emit(j.dump(2), a.out);
    return 0;
}

struct SenseArgs {
    std::string in;
    int m = 100, p = 0;
    std::string kind = "dense";
    std::uint64_t seed = 0;
    bool unnormalized = false;
    std::string out;
};

int run_sense(const SenseArgs& a) {
    const json sig = json::parse(bilr::read_file(a.in));
    const bilr::Matrix x = matrix_from_json(sig.at("entries"));
    const int n = static_cast<int>(x.rows());

    json ens;
    ens["n"] = n;
    ens["m"] = a.m;
    ens["seed"] = a.seed;
    bilr::SignVector y;
    if (a.kind == "dense") {
        const bilr::DenseEnsemble e = bilr::make_dense_ensemble(n, a.m, a.seed, !a.unnormalized);
        y = bilr::quantize(bilr::sense_raw(e, x));
        ens["kind"] = "dense";
        ens["normalized"] = !a.unnormalized;
    } else if (a.kind == "factorized") {
        if (a.p < 1) throw std::invalid_argument("sense: factorized sensing requires --p >= 1");
        const bilr::FactorizedEnsemble e = bilr::make_factorized_ensemble(n, a.m, a.p, a.seed);
        y = bilr::quantize(bilr::sense_raw(e, x));
        ens["kind"] = "factorized";
        ens["p"] = a.p;
    } else {
        throw std::invalid_argument("sense: --kind must be 'dense' or 'factorized'");
    }

    json j;
    j["type"] = "one_bit_measurements";
    j["ensemble"] = ens;
    json bits = json::array();
    for (std::int8_t b : y.bits) bits.push_back(static_cast<int>(b));
    j["bits"] = bits;
    emit(j.dump(2), a.out);
    return 0;
}

struct RecoverArgs {
    std::string in;
    int s = 2, r = 1;
    bool allow_heuristic = false;
    int sweeps = 8;
    std::string out;
};

int run_recover(const RecoverArgs& a) {
    const json doc = json::parse(bilr::read_file(a.in));
    const json& ens = doc.at("ensemble");
    bilr::SignVector y;
    for (const auto& b : doc.at("bits")) y.bits.push_back(static_cast<std::int8_t>(b.get<int>()));

    bilr::RecoveryOutput out;
    const std::string kind = ens.at("kind").get<std::string>();
    if (kind == "dense") {
        const bilr::DenseEnsemble e =
            bilr::make_dense_ensemble(ens.at("n").get<int>(), ens.at("m").get<int>(),
                                      ens.at("seed").get<std::uint64_t>(),
                                      ens.value("normalized", true));
        out = bilr::recover_pbp(y, e, a.s, a.r, a.allow_heuristic, a.sweeps);
    } else if (kind == "factorized") {
        const bilr::FactorizedEnsemble e = bilr::make_factorized_ensemble(
            ens.at("n").get<int>(), ens.at("m").get<int>(), ens.at("p").get<int>(),
            ens.at("seed").get<std::uint64_t>());
        out = bilr::recover_multistep(y, e, a.s, a.r);
    } else {
        throw std::invalid_argument("recover: unknown ensemble kind '" + kind + "'");
    }

    json j;
    j["type"] = "recovery";
    j["scheme"] = out.meta.scheme;
    j["s"] = a.s;
    j["r"] = a.r;
    j["estimate"] = matrix_to_json(out.estimate);
    j["row_support"] = out.structured.row_support;
    j["col_support"] = out.structured.col_support;
    json meta;
    meta["projection"] = out.meta.projection;
    meta["back_norm"] = out.meta.back_norm;
    meta["estimate_norm"] = out.meta.estimate_norm;
    meta["consistency_hamming_frac"] = out.meta.consistency_hamming_frac;
    j["metadata"] = meta;
    emit(j.dump(2), a.out);
    return 0;
}

struct AuditArgs {
    std::string kind = "bilr";
    int n = 12, s = 3, r = 1, m = 1000, p = 0, trials = 200;
    std::uint64_t seed = 0;
    std::string out;
};

int run_audit(const AuditArgs& a) {
    bilr::RipReport report;
    if (a.kind == "bilr") {
        const bilr::DenseEnsemble e = bilr::make_dense_ensemble(a.n, a.m, a.seed, true);
        report = bilr::rip_audit_bilr(e, a.s, a.r, a.trials, bilr::seed_mix({a.seed, 1}));
    } else if (a.kind == "rank") {
        if (a.p < 1) throw std::invalid_argument("rip-audit: kind 'rank' requires --p >= 1");
        const bilr::FactorizedEnsemble e = bilr::make_factorized_ensemble(a.n, a.m, a.p, a.seed);
        report = bilr::rip_audit_rank(e, a.r, a.trials, bilr::seed_mix({a.seed, 1}));
    } else if (a.kind == "sparse") {
        if (a.p < 1) throw std::invalid_argument("rip-audit: kind 'sparse' requires --p >= 1");
        bilr::GaussianStream g(bilr::seed_mix({a.seed, bilr::stream::side_b}));
        const bilr::Matrix d =
            bilr::gaussian_matrix(a.p, a.n, g) / std::sqrt(static_cast<double>(a.p));
        report = bilr::rip_audit_sparse(d, a.s, a.trials, bilr::seed_mix({a.seed, 1}));
    } else {
        throw std::invalid_argument("rip-audit: --kind must be 'bilr', 'rank', or 'sparse'");
    }
    emit(bilr::to_json(report), a.out);
    return 0;
}

struct ExperimentArgs {
    std::string config;
    std::string out;
    std::string format = "csv";
    int jobs = 0;
    bool timing = false;
};

int run_experiment_cmd(const ExperimentArgs& a) {
    const bilr::ExperimentConfig cfg = bilr::load_config(a.config);
    if (a.jobs > 0) omp_set_num_threads(a.jobs);
    bilr::RunOptions opts;
    opts.timing = a.timing;
    const std::vector<bilr::ExperimentRecord> records = bilr::run_experiment(cfg, opts);

    const std::string text =
        a.format == "json" ? bilr::to_json_records(records) : bilr::to_csv(records);
    std::string out_path = a.out.empty() ? cfg.output_path : a.out;
    if (out_path.empty())
        std::cout << text;
    else
        bilr::write_file(out_path, text);
    return 0;
}

struct FitArgs {
    std::string in;
    std::string stat = "median";
    std::string column = "error_unit";
};

int run_fit(const FitArgs& a) {
    const std::vector<bilr::ExperimentRecord> records =
        bilr::records_from_csv(bilr::read_file(a.in));
    const bilr::DecayFit fit = bilr::fit_decay_slope(records, a.stat, a.column);
    json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-bit bisparse low-rank recovery experiments"};
    app.require_subcommand(1);

    GenerateArgs gen;
    CLI::App* cmd_gen = app.add_subcommand("generate", "draw a random bisparse low-rank signal");
    cmd_gen->add_option("--n", gen.n, "dimension");
    cmd_gen->add_option("--s", gen.s, "sparsity budget");
    cmd_gen->add_option("--r", gen.r, "rank budget");
    cmd_gen->add_option("--seed", gen.seed, "rng seed");
    cmd_gen->add_option("--out", gen.out, "output path (stdout if omitted)");

    SenseArgs sen;
    CLI::App* cmd_sen = app.add_subcommand("sense", "take one-bit measurements of a signal");
    cmd_sen->add_option("--in", sen.in, "signal JSON from 'generate'")->required();
    cmd_sen->add_option("--m", sen.m, "measurement count");
    cmd_sen->add_option("--kind", sen.kind, "dense|factorized");
    cmd_sen->add_option("--p", sen.p, "inner dimension (factorized)");
    cmd_sen->add_option("--seed", sen.seed, "ensemble seed");
    cmd_sen->add_flag("--unnormalized", sen.unnormalized, "skip sqrt(pi/2)/m normalization (dense)");
    cmd_sen->add_option("--out", sen.out, "output path");

    RecoverArgs rec;
    CLI::App* cmd_rec = app.add_subcommand("recover", "reconstruct from one-bit measurements");
    cmd_rec->add_option("--in", rec.in, "measurements JSON from 'sense'")->required();
    cmd_rec->add_option("--s", rec.s, "sparsity budget");
    cmd_rec->add_option("--r", rec.r, "rank budget");
    cmd_rec->add_flag("--allow-heuristic", rec.allow_heuristic,
                      "use the heuristic projection beyond the exhaustive ceiling");
    cmd_rec->add_option("--sweeps", rec.sweeps, "heuristic refinement sweeps");
    cmd_rec->add_option("--out", rec.out, "output path");

    AuditArgs aud;
    CLI::App* cmd_aud = app.add_subcommand("rip-audit", "empirical restricted isometry audit");
    cmd_aud->add_option("--kind", aud.kind, "bilr|rank|sparse");
    cmd_aud->add_option("--n", aud.n, "dimension");
    cmd_aud->add_option("--s", aud.s, "sparsity");
    cmd_aud->add_option("--r", aud.r, "rank");
    cmd_aud->add_option("--m", aud.m, "measurement count");
    cmd_aud->add_option("--p", aud.p, "inner / row dimension");
    cmd_aud->add_option("--trials", aud.trials, "audit sample count");
    cmd_aud->add_option("--seed", aud.seed, "rng seed");
    cmd_aud->add_option("--out", aud.out, "output path");

    ExperimentArgs exp;
    CLI::App* cmd_exp = app.add_subcommand("experiment", "run a Monte-Carlo sweep from a config");
    cmd_exp->add_option("--config", exp.config, "experiment config JSON")->required();
    cmd_exp->add_option("--out", exp.out, "output path (overrides config output_path)");
    cmd_exp->add_option("--format", exp.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd_exp->add_option("--jobs", exp.jobs, "worker thread bound");
    cmd_exp->add_flag("--timing", exp.timing,
                      "record wall time per trial (output no longer byte-deterministic)");

    FitArgs fit;
    CLI::App* cmd_fit = app.add_subcommand("fit", "fit a log-log decay slope to results");
    cmd_fit->add_option("--in", fit.in, "results CSV from 'experiment'")->required();
    cmd_fit->add_option("--stat", fit.stat, "median|mean");
    cmd_fit->add_option("--column", fit.column, "error_unit|error_raw");

    try {
        app.parse(argc, argv);
        if (cmd_gen->parsed()) return run_generate(gen);
        if (cmd_sen->parsed()) return run_sense(sen);
        if (cmd_rec->parsed()) return run_recover(rec);
        if (cmd_aud->parsed()) return run_audit(aud);
        if (cmd_exp->parsed()) return run_experiment_cmd(exp);
        if (cmd_fit->parsed()) return run_fit(fit);
        std::cerr << app.help() << '\n';
        return 1;
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help() << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n' << app.help() << '\n';
        return 1;
    } catch (const bilr::io_error& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
