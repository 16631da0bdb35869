#include "bilr/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace bilr {

std::string to_string(Scheme scheme) { return scheme == Scheme::pbp ? "pbp" : "multistep"; }

namespace {

const char* kCsvHeader = "m,trial,seed,error_raw,error_unit,hamming_consistency_frac,wall_time_ms";

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int require_positive_int(const nlohmann::json& j, const std::string& key) {
    if (!j.at(key).is_number_integer())
        throw std::invalid_argument("config: key '" + key + "' must be an integer");
    const long long v = j.at(key).get<long long>();
    if (v < 1) throw std::invalid_argument("config: key '" + key + "' must be >= 1");
    return static_cast<int>(v);
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + ex.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

    static const std::vector<std::string> known = {
        "scheme", "n",           "s",           "r",          "m_grid",
        "p",      "trials_per_m", "master_seed", "output_path", "error_mode",
        "allow_heuristic_projection"};
    for (const auto& item : j.items()) {
        if (std::find(known.begin(), known.end(), item.key()) == known.end())
            throw std::invalid_argument("config: unknown key '" + item.key() + "'");
    }

    ExperimentConfig cfg;
    const std::string scheme = j.at("scheme").get<std::string>();
    if (scheme == "pbp")
        cfg.scheme = Scheme::pbp;
    else if (scheme == "multistep")
        cfg.scheme = Scheme::multistep;
    else
        throw std::invalid_argument("config: scheme must be 'pbp' or 'multistep'");

    cfg.n = require_positive_int(j, "n");
    cfg.s = require_positive_int(j, "s");
    cfg.r = require_positive_int(j, "r");
    if (cfg.r > cfg.s || cfg.s > cfg.n)
        throw std::invalid_argument("config: requires 1 <= r <= s <= n");

    if (!j.at("m_grid").is_array() || j.at("m_grid").empty())
        throw std::invalid_argument("config: m_grid must be a nonempty array");
    for (const auto& v : j.at("m_grid")) {
        if (!v.is_number_integer() || v.get<long long>() < 1)
            throw std::invalid_argument("config: m_grid entries must be integers >= 1");
        cfg.m_grid.push_back(static_cast<int>(v.get<long long>()));
    }
    for (std::size_t i = 1; i < cfg.m_grid.size(); ++i)
        if (cfg.m_grid[i] <= cfg.m_grid[i - 1])
            throw std::invalid_argument("config: m_grid must be strictly increasing");

    cfg.trials_per_m = require_positive_int(j, "trials_per_m");
    if (!j.at("master_seed").is_number_integer())
        throw std::invalid_argument("config: master_seed must be an integer");
    cfg.master_seed = j.at("master_seed").get<std::uint64_t>();

    if (cfg.scheme == Scheme::multistep) {
        if (!j.contains("p")) throw std::invalid_argument("config: multistep requires key 'p'");
        cfg.p = require_positive_int(j, "p");
    } else if (j.contains("p")) {
        throw std::invalid_argument("config: key 'p' is only valid for scheme 'multistep'");
    }

    if (j.contains("output_path")) cfg.output_path = j.at("output_path").get<std::string>();
    if (j.contains("error_mode")) {
        cfg.error_mode = j.at("error_mode").get<std::string>();
        if (cfg.error_mode != "raw" && cfg.error_mode != "unit-normalized" &&
            cfg.error_mode != "both")
            throw std::invalid_argument(
                "config: error_mode must be 'raw', 'unit-normalized', or 'both'");
    }
    if (j.contains("allow_heuristic_projection"))
        cfg.allow_heuristic_projection = j.at("allow_heuristic_projection").get<bool>();
    return cfg;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw io_error("error reading file: " + path);
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open file for writing: " + path);
    out << content;
    out.flush();
    if (!out) throw io_error("error writing file: " + path);
}

ExperimentConfig load_config(const std::string& path) {
    return config_from_json(read_file(path));
}

namespace {

ExperimentRecord run_trial(const ExperimentConfig& cfg, int m, int trial, bool timing) {
    const auto start = std::chrono::steady_clock::now();

    ExperimentRecord rec;
    rec.m = m;
    rec.trial = trial;
    rec.seed = seed_mix({cfg.master_seed, static_cast<std::uint64_t>(m),
                         static_cast<std::uint64_t>(trial)});

    const BilrMatrix signal =
        generate_bilr(cfg.n, cfg.s, cfg.r, seed_mix({rec.seed, stream::signal}));
    const Matrix x = signal.dense();

    RecoveryOutput out;
    if (cfg.scheme == Scheme::pbp) {
        const DenseEnsemble ens =
            make_dense_ensemble(cfg.n, m, seed_mix({rec.seed, stream::ensemble}), true);
        const SignVector y = quantize(sense_raw(ens, x));
        out = recover_pbp(y, ens, cfg.s, cfg.r, cfg.allow_heuristic_projection);
    } else {
        const FactorizedEnsemble ens =
            make_factorized_ensemble(cfg.n, m, cfg.p, seed_mix({rec.seed, stream::ensemble}));
        const SenseBackprojection sb = sense_and_backproject(ens, x);
        out = recover_multistep(sb.signs, sb.back, ens, cfg.s, cfg.r);
    }

    if (cfg.error_mode != "unit-normalized") rec.error_raw = frobenius_norm(x - out.estimate);
    if (cfg.error_mode != "raw") {
        if (out.meta.estimate_norm > 0.0) {
            rec.error_unit = frobenius_norm(x - out.estimate / out.meta.estimate_norm);
        } else {
            rec.error_unit = frobenius_norm(x);  // degenerate zero estimate
        }
    }
    rec.hamming_consistency_frac = out.meta.consistency_hamming_frac;
    rec.structure_ok = in_bilr_set(out.estimate, cfg.s, cfg.r);

    if (timing) {
        const auto stop = std::chrono::steady_clock::now();
        rec.wall_time_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    }
    return rec;
}

}  // namespace

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& cfg,
                                             const RunOptions& options) {
    const long total = static_cast<long>(cfg.m_grid.size()) * cfg.trials_per_m;
    std::vector<ExperimentRecord> records(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic)
    for (long idx = 0; idx < total; ++idx) {
        const int m = cfg.m_grid[static_cast<std::size_t>(idx / cfg.trials_per_m)];
        const int trial = static_cast<int>(idx % cfg.trials_per_m);
        records[static_cast<std::size_t>(idx)] = run_trial(cfg, m, trial, options.timing);
    }
    return records;
}

std::string to_csv(const std::vector<ExperimentRecord>& records) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const ExperimentRecord& r : records) {
        out += std::to_string(r.m);
        out += ',';
        out += std::to_string(r.trial);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += format_double(r.error_raw);
        out += ',';
        out += format_double(r.error_unit);
        out += ',';
        out += format_double(r.hamming_consistency_frac);
        out += ',';
        out += format_double(r.wall_time_ms);
        out += '\n';
    }
    return out;
}

std::vector<ExperimentRecord> records_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::invalid_argument("records_from_csv: missing or unexpected header");
    std::vector<ExperimentRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (fields.size() != 7)
            throw std::invalid_argument("records_from_csv: expected 7 fields per row");
        ExperimentRecord r;
        r.m = std::stoi(fields[0]);
        r.trial = std::stoi(fields[1]);
        r.seed = std::stoull(fields[2]);
        r.error_raw = std::stod(fields[3]);
        r.error_unit = std::stod(fields[4]);
        r.hamming_consistency_frac = std::stod(fields[5]);
        r.wall_time_ms = std::stod(fields[6]);
        records.push_back(r);
    }
    return records;
}

std::string to_json_records(const std::vector<ExperimentRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const ExperimentRecord& r : records) {
        nlohmann::json j;
        j["m"] = r.m;
        j["trial"] = r.trial;
        j["seed"] = r.seed;
        j["error_raw"] = r.error_raw;
        j["error_unit"] = r.error_unit;
        j["hamming_consistency_frac"] = r.hamming_consistency_frac;
        j["wall_time_ms"] = r.wall_time_ms;
        arr.push_back(j);
    }
    return arr.dump(2);
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t k = values.size() / 2;
    if (values.size() % 2 == 1) return values[k];
    return 0.5 * (values[k - 1] + values[k]);
}

DecayFit fit_decay_slope(const std::vector<ExperimentRecord>& records,
                         const std::string& statistic, const std::string& column) {
    if (statistic != "median" && statistic != "mean")
        throw std::invalid_argument("fit_decay_slope: statistic must be 'median' or 'mean'");
    if (column != "error_unit" && column != "error_raw")
        throw std::invalid_argument("fit_decay_slope: column must be 'error_unit' or 'error_raw'");

    std::map<int, std::vector<double>> grouped;
    for (const ExperimentRecord& r : records)
        grouped[r.m].push_back(column == "error_unit" ? r.error_unit : r.error_raw);
    if (grouped.size() < 2)
        throw std::invalid_argument("fit_decay_slope: need at least two distinct m values");

    std::vector<double> xs, ys;
    for (auto& [m, errors] : grouped) {
        double stat;
        if (statistic == "median") {
            stat = median(errors);
        } else {
            double sum = 0.0;
            for (double v : errors) sum += v;
            stat = sum / static_cast<double>(errors.size());
        }
        if (!(stat > 0.0))
            throw std::invalid_argument("fit_decay_slope: nonpositive error statistic at m = " +
                                        std::to_string(m));
        xs.push_back(std::log(static_cast<double>(m)));
        ys.push_back(std::log(stat));
    }

    const double count = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    DecayFit fit;
    fit.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / count;
    return fit;
}

}  // namespace bilr
