#include "coarray/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <variant>

#include <omp.h>

#include "coarray/estimation.hpp"
#include "coarray/metrics.hpp"
#include "coarray/signal_model.hpp"

namespace coarray {

namespace {

constexpr std::pair<ExperimentId, const char*> kIdNames[] = {
    {ExperimentId::fig1_coarray_vs_direct, "fig1_coarray_vs_direct"},
    {ExperimentId::fig2_prob_resolution, "fig2_prob_resolution"},
    {ExperimentId::fig3_snr_snapshot_grid, "fig3_snr_snapshot_grid"},
    {ExperimentId::fig4_error_vs_sensors, "fig4_error_vs_sensors"},
    {ExperimentId::fig5_dynamic_range, "fig5_dynamic_range"},
    {ExperimentId::custom, "custom"},
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(std::string_view s, const std::string& what) {
    const std::string t = trim(s);
    double v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw std::invalid_argument("bad number '" + t + "' for " + what);
    }
    return v;
}

long long parse_integer(std::string_view s, const std::string& what) {
    const std::string t = trim(s);
    long long v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
        throw std::invalid_argument("bad integer '" + t + "' for " + what);
    }
    return v;
}

std::string shortest(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string sig9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

const char* to_string(ExperimentId id) {
    for (const auto& [k, name] : kIdNames) {
        if (k == id) return name;
    }
    return "custom";
}

ExperimentId parse_experiment_id(std::string_view name) {
    for (const auto& [k, n] : kIdNames) {
        if (name == n) return k;
    }
    // short aliases
    for (const auto& [k, n] : kIdNames) {
        const std::string_view full(n);
        if (full.size() > name.size() && full.substr(0, name.size()) == name &&
            full[name.size()] == '_') {
            return k;
        }
    }
    throw std::invalid_argument("unknown experiment '" + std::string(name) + "'");
}

std::string Arm::label() const {
    return std::string(array == ArrayKind::ula ? "ula" : "nested") + ":" +
           (method == Method::coarray ? "coarray" : "direct");
}

SensorArray Arm::build(int num_sensors) const {
    return array == ArrayKind::ula ? ula(num_sensors) : balanced_nested(num_sensors);
}

Arm Arm::parse(std::string_view label) {
    const std::string s = trim(label);
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    const std::string method = colon == std::string::npos ? "coarray" : s.substr(colon + 1);
    Arm a;
    if (kind == "ula") a.array = ArrayKind::ula;
    else if (kind == "nested") a.array = ArrayKind::nested;
    else throw std::invalid_argument("unknown array kind in arm '" + s + "'");
    if (method == "coarray") a.method = Method::coarray;
    else if (method == "direct") a.method = Method::direct;
    else throw std::invalid_argument("unknown method in arm '" + s + "'");
    if (a.array == ArrayKind::nested && a.method == Method::direct) {
        throw std::invalid_argument("direct ESPRIT needs a ULA, got '" + s + "'");
    }
    return a;
}

double DeltaSpec::evaluate(int num_sensors) const {
    return coeff / std::pow(static_cast<double>(num_sensors), exponent);
}

std::string DeltaSpec::to_string() const {
    if (exponent == 0) return shortest(coeff);
    if (exponent == 1) return shortest(coeff) + "/P";
    return shortest(coeff) + "/P^" + shortest(exponent);
}

DeltaSpec DeltaSpec::parse(std::string_view text) {
    const std::string s = trim(text);
    const auto slash = s.find('/');
    if (slash == std::string::npos) return DeltaSpec{parse_double(s, "delta"), 0};
    DeltaSpec d;
    d.coeff = parse_double(s.substr(0, slash), "delta");
    const std::string rest = trim(s.substr(slash + 1));
    if (rest == "P") {
        d.exponent = 1;
    } else if (rest.size() > 2 && rest.substr(0, 2) == "P^") {
        d.exponent = parse_double(rest.substr(2), "delta exponent");
    } else {
        throw std::invalid_argument("bad delta '" + s + "', expected x, x/P or x/P^k");
    }
    return d;
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
    if (arms.empty()) fail("config: arms must be non-empty");
    if (sensors.empty()) fail("config: P must be non-empty");
    if (snapshots.empty()) fail("config: L must be non-empty");
    if (snr_db.empty()) fail("config: snr_db must be non-empty");
    if (delta.empty()) fail("config: delta must be non-empty");
    if (dynamic_range.empty()) fail("config: dynamic_range must be non-empty");
    if (trials < 1) fail("config: trials must be >= 1");
    if (num_sources < 1) fail("config: sources must be >= 1");
    if (static_cast<std::size_t>(num_sources) > kMaxMatchingSources) {
        fail("config: sources must be <= " + std::to_string(kMaxMatchingSources));
    }
    if (!(p_min > 0)) fail("config: p_min must be positive");
    for (int l : snapshots) {
        if (l < 1) fail("config: every L must be >= 1");
    }
    for (double r : dynamic_range) {
        if (!(r >= 1)) fail("config: dynamic_range entries must be >= 1");
    }
    for (double s : snr_db) {
        if (!std::isfinite(s)) fail("config: snr_db entries must be finite");
    }
    for (const auto& arm : arms) {
        for (int p : sensors) {
            if (p < 2) fail("config: every P must be >= 2");
            const SensorArray a = arm.build(p);
            if (arm.method == Method::direct && num_sources >= p) {
                fail("config: direct ESPRIT needs sources < P (P = " + std::to_string(p) + ")");
            }
            const CoarrayStructure c = coarray_structure(a);
            if (num_sources > c.m_ca) {
                fail("config: sources exceed the coarray aperture for P = " +
                     std::to_string(p));
            }
        }
    }
    for (const auto& d : delta) {
        for (int p : sensors) {
            const double v = d.evaluate(p);
            if (!(v > 0) || v * (num_sources - 1) >= 1.0) {
                fail("config: delta " + d.to_string() + " does not fit " +
                     std::to_string(num_sources) + " distinct sources");
            }
        }
    }
}

std::size_t ExperimentConfig::grid_size() const {
    return sensors.size() * snapshots.size() * snr_db.size() * delta.size() *
           dynamic_range.size();
}

std::vector<GridPoint> expand_grid(const ExperimentConfig& cfg) {
    std::vector<GridPoint> out;
    out.reserve(cfg.grid_size());
    for (int p : cfg.sensors)
        for (int l : cfg.snapshots)
            for (double snr : cfg.snr_db)
                for (const auto& d : cfg.delta)
                    for (double dr : cfg.dynamic_range)
                        out.push_back(GridPoint{p, l, snr, d.evaluate(p), dr});
    return out;
}

SourceScene scene_for(const ExperimentConfig& cfg, const GridPoint& g) {
    const auto s = static_cast<std::size_t>(cfg.num_sources);
    std::vector<double> omegas(s);
    std::vector<double> powers(s, cfg.p_min);
    for (std::size_t i = 0; i < s; ++i) omegas[i] = cfg.omega_start + static_cast<double>(i) * g.delta;
    powers[0] = g.dynamic_range * cfg.p_min;
    const double noise = cfg.p_min * std::pow(10.0, -g.snr_db / 10.0);
    return SourceScene(std::move(omegas), std::move(powers), noise);
}

TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t arm_index, const GridPoint& g,
                      std::size_t grid_index, std::size_t trial) {
    TrialRecord rec;
    rec.arm_index = arm_index;
    rec.grid_index = grid_index;
    rec.trial = trial;
    rec.seed = derive_seed(cfg.base_seed, {arm_index, grid_index, trial});
    rec.md = std::numeric_limits<double>::quiet_NaN();

    const Arm& arm = cfg.arms[arm_index];
    try {
        const SensorArray array = arm.build(g.num_sensors);
        const CoarrayStructure c = coarray_structure(array);
        const SourceScene scene = scene_for(cfg, g);
        const SnapshotMatrix y = sample_snapshots(array, scene, g.num_snapshots, rec.seed);
        const CMatrix r_hat = sample_covariance(y.data);

        CoarrayCovariance est;
        try {
            est = redundancy_average(r_hat, c, array,
                                     EstimatedProvenance{g.num_snapshots, rec.seed});
        } catch (const std::exception& e) {
            throw EstimationError(FailureStage::averaging, e.what());
        }
        rec.cov_error = covariance_error(exact_coarray_covariance(c, scene), est);

        const DoaEstimate doa = arm.method == Method::coarray
                                    ? esprit_on_covariance(est.matrix, cfg.num_sources)
                                    : direct_esprit_from_covariance(r_hat, array, cfg.num_sources);
        rec.md = matching_distance(scene.omegas(), doa.omegas_hat);
        rec.resolved = resolution_success(scene.omegas(), doa.omegas_hat, g.delta);
    } catch (const EstimationError& e) {
        rec.failure = e.stage();
        rec.resolved = false;
    } catch (const std::exception&) {
        rec.failure = FailureStage::input;
        rec.resolved = false;
    }
    return rec;
}

int threads_from_env() {
    const char* v = std::getenv("COARRAY_LAB_THREADS");
    if (v == nullptr || *v == '\0') return 0;
    try {
        const long long n = parse_integer(v, "COARRAY_LAB_THREADS");
        return n > 0 ? static_cast<int>(n) : 0;
    } catch (const std::invalid_argument&) {
        return 0;
    }
}

namespace {

struct Job {
    std::size_t arm;
    std::size_t grid;
    std::size_t trial;
};

std::vector<Job> jobs_for(const ExperimentConfig& cfg, std::size_t grid_size) {
    std::vector<Job> jobs;
    jobs.reserve(cfg.arms.size() * grid_size * static_cast<std::size_t>(cfg.trials));
    for (std::size_t a = 0; a < cfg.arms.size(); ++a)
        for (std::size_t g = 0; g < grid_size; ++g)
            for (std::size_t t = 0; t < static_cast<std::size_t>(cfg.trials); ++t)
                jobs.push_back(Job{a, g, t});
    return jobs;
}

}  // namespace

Dataset run_experiment(const ExperimentConfig& cfg, int threads) {
    cfg.validate();
    Dataset ds;
    ds.config = cfg;
    ds.grid = expand_grid(cfg);
    const auto jobs = jobs_for(cfg, ds.grid.size());
    ds.records.resize(jobs.size());

    int n = threads > 0 ? threads : omp_get_max_threads();
    if (const int cap = threads_from_env(); cap > 0) n = std::min(n, cap);
    n = std::max(n, 1);

    const auto total = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(n)
    for (std::ptrdiff_t i = 0; i < total; ++i) {
        const Job& j = jobs[static_cast<std::size_t>(i)];
        ds.records[static_cast<std::size_t>(i)] = run_trial(cfg, j.arm, ds.grid[j.grid], j.grid, j.trial);
    }
    ds.aggregates = aggregate(cfg, ds.grid, ds.records);
    return ds;
}

Dataset run_experiment_serial(const ExperimentConfig& cfg) {
    cfg.validate();
    Dataset ds;
    ds.config = cfg;
    ds.grid = expand_grid(cfg);
    for (const Job& j : jobs_for(cfg, ds.grid.size())) {
        ds.records.push_back(run_trial(cfg, j.arm, ds.grid[j.grid], j.grid, j.trial));
    }
    ds.aggregates = aggregate(cfg, ds.grid, ds.records);
    return ds;
}

std::vector<Aggregate> aggregate(const ExperimentConfig& cfg, const std::vector<GridPoint>& grid,
                                 const std::vector<TrialRecord>& records) {
    std::vector<std::vector<const TrialRecord*>> buckets(cfg.arms.size() * grid.size());
    for (const auto& r : records) {
        if (r.arm_index >= cfg.arms.size() || r.grid_index >= grid.size()) {
            throw std::invalid_argument("aggregate: record index out of range");
        }
        buckets[r.arm_index * grid.size() + r.grid_index].push_back(&r);
    }

    std::vector<Aggregate> out;
    out.reserve(buckets.size());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t a = 0; a < cfg.arms.size(); ++a) {
        for (std::size_t g = 0; g < grid.size(); ++g) {
            auto bucket = buckets[a * grid.size() + g];
            std::sort(bucket.begin(), bucket.end(),
                      [](const TrialRecord* x, const TrialRecord* y) { return x->trial < y->trial; });
            Aggregate agg;
            agg.arm = cfg.arms[a].label();
            agg.grid = grid[g];
            agg.trials = static_cast<int>(bucket.size());
            std::vector<double> mds;
            double cov_sum = 0;
            int resolved = 0;
            for (const TrialRecord* r : bucket) {
                cov_sum += r->cov_error;
                if (r->failure) {
                    ++agg.failures;
                    continue;
                }
                mds.push_back(r->md);
                if (r->resolved) ++resolved;
            }
            if (mds.empty()) {
                agg.mean_md = nan;
                agg.median_md = nan;
            } else {
                double sum = 0;
                for (double m : mds) sum += m;
                agg.mean_md = sum / static_cast<double>(mds.size());
                std::sort(mds.begin(), mds.end());
                const std::size_t h = mds.size() / 2;
                agg.median_md = mds.size() % 2 == 1 ? mds[h] : 0.5 * (mds[h - 1] + mds[h]);
            }
            agg.prob_resolved = agg.trials > 0 ? static_cast<double>(resolved) / agg.trials : nan;
            agg.mean_cov_error = agg.trials > 0 ? cov_sum / agg.trials : nan;
            out.push_back(std::move(agg));
        }
    }
    auto key = [](const Aggregate& x) {
        return std::tie(x.arm, x.grid.num_sensors, x.grid.num_snapshots, x.grid.snr_db,
                        x.grid.delta, x.grid.dynamic_range);
    };
    std::stable_sort(out.begin(), out.end(),
                     [&](const Aggregate& x, const Aggregate& y) { return key(x) < key(y); });
    return out;
}

std::string format_csv(const std::vector<Aggregate>& aggregates) {
    std::ostringstream os;
    os << "arm,P,L,snr_db,delta,dynamic_range,trials,mean_md,median_md,prob_resolved,"
          "mean_cov_error,failures\n";
    for (const auto& a : aggregates) {
        os << a.arm << ',' << a.grid.num_sensors << ',' << a.grid.num_snapshots << ','
           << sig9(a.grid.snr_db) << ',' << sig9(a.grid.delta) << ','
           << sig9(a.grid.dynamic_range) << ',' << a.trials << ',' << sig9(a.mean_md) << ','
           << sig9(a.median_md) << ',' << sig9(a.prob_resolved) << ','
           << sig9(a.mean_cov_error) << ',' << a.failures << '\n';
    }
    return os.str();
}

void emit_csv(const Dataset& dataset, const std::string& path) {
    if (dataset.aggregates.empty()) throw std::runtime_error("emit_csv: dataset is empty");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << format_csv(dataset.aggregates);
    if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

std::string format_trials_csv(const Dataset& dataset) {
    std::ostringstream os;
    os << "arm,P,L,snr_db,delta,dynamic_range,trial,seed,md,resolved,cov_error,failure\n";
    for (const auto& r : dataset.records) {
        const GridPoint& g = dataset.grid[r.grid_index];
        os << dataset.config.arms[r.arm_index].label() << ',' << g.num_sensors << ','
           << g.num_snapshots << ',' << sig9(g.snr_db) << ',' << sig9(g.delta) << ','
           << sig9(g.dynamic_range) << ',' << r.trial << ',' << r.seed << ',' << sig9(r.md)
           << ',' << (r.resolved ? 1 : 0) << ',' << sig9(r.cov_error) << ','
           << (r.failure ? to_string(*r.failure) : "") << '\n';
    }
    return os.str();
}

// Config files ------------------------------------------------------------

namespace {

using Value = std::variant<std::string, std::vector<std::string>>;

// Splits a bracketed list on commas, stripping quotes from each item.
std::vector<std::string> split_list(std::string_view body, int line) {
    std::vector<std::string> items;
    std::string cur;
    bool quoted = false;
    bool any = false;
    for (char ch : body) {
        if (ch == '"') {
            quoted = !quoted;
            any = true;
        } else if (ch == ',' && !quoted) {
            items.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
            if (!std::isspace(static_cast<unsigned char>(ch))) any = true;
        }
    }
    if (quoted) throw std::invalid_argument("line " + std::to_string(line) + ": unterminated string");
    if (any || !items.empty()) items.push_back(trim(cur));
    for (const auto& it : items) {
        if (it.empty()) throw std::invalid_argument("line " + std::to_string(line) + ": empty list item");
    }
    return items;
}

std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

std::vector<std::string> as_list(const Value& v) {
    if (const auto* l = std::get_if<std::vector<std::string>>(&v)) return *l;
    return {std::get<std::string>(v)};
}

std::string as_scalar(const Value& v, const std::string& key) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    throw std::invalid_argument("config: '" + key + "' takes a single value");
}

int as_int(const std::string& s, const std::string& key) {
    const long long v = parse_integer(s, key);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        throw std::invalid_argument("config: '" + key + "' out of range");
    }
    return static_cast<int>(v);
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    std::map<std::string, std::pair<Value, int>> entries;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        const int start = lineno;
        if (key.empty() || value.empty()) {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
        }
        Value v;
        if (value.front() == '[') {
            while (value.find(']') == std::string::npos) {
                if (!std::getline(in, raw)) {
                    throw std::invalid_argument("line " + std::to_string(start) + ": unterminated list");
                }
                ++lineno;
                value += ' ' + trim(strip_comment(raw));
            }
            const auto close = value.rfind(']');
            if (!trim(value.substr(close + 1)).empty()) {
                throw std::invalid_argument("line " + std::to_string(lineno) + ": junk after list");
            }
            v = split_list(std::string_view(value).substr(1, close - 1), start);
        } else if (value.front() == '"') {
            if (value.size() < 2 || value.back() != '"') {
                throw std::invalid_argument("line " + std::to_string(lineno) + ": unterminated string");
            }
            v = value.substr(1, value.size() - 2);
        } else {
            v = value;
        }
        if (!entries.emplace(key, std::make_pair(std::move(v), start)).second) {
            throw std::invalid_argument("line " + std::to_string(start) + ": duplicate key '" + key + "'");
        }
    }

    ExperimentConfig cfg;
    cfg.dynamic_range = {1.0};
    for (const auto& [key, entry] : entries) {
        const Value& v = entry.first;
        try {
            if (key == "experiment") {
                cfg.id = parse_experiment_id(as_scalar(v, key));
            } else if (key == "arms") {
                cfg.arms.clear();
                for (const auto& s : as_list(v)) cfg.arms.push_back(Arm::parse(s));
            } else if (key == "P") {
                cfg.sensors.clear();
                for (const auto& s : as_list(v)) cfg.sensors.push_back(as_int(s, key));
            } else if (key == "L") {
                cfg.snapshots.clear();
                for (const auto& s : as_list(v)) cfg.snapshots.push_back(as_int(s, key));
            } else if (key == "snr_db") {
                cfg.snr_db.clear();
                for (const auto& s : as_list(v)) cfg.snr_db.push_back(parse_double(s, key));
            } else if (key == "delta") {
                cfg.delta.clear();
                for (const auto& s : as_list(v)) cfg.delta.push_back(DeltaSpec::parse(s));
            } else if (key == "dynamic_range") {
                cfg.dynamic_range.clear();
                for (const auto& s : as_list(v)) cfg.dynamic_range.push_back(parse_double(s, key));
            } else if (key == "sources") {
                cfg.num_sources = as_int(as_scalar(v, key), key);
            } else if (key == "trials") {
                cfg.trials = as_int(as_scalar(v, key), key);
            } else if (key == "base_seed") {
                const std::string s = trim(as_scalar(v, key));
                std::uint64_t seed = 0;
                auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
                if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
                    throw std::invalid_argument("bad base_seed '" + s + "'");
                }
                cfg.base_seed = seed;
            } else if (key == "p_min") {
                cfg.p_min = parse_double(as_scalar(v, key), key);
            } else if (key == "omega_start") {
                cfg.omega_start = parse_double(as_scalar(v, key), key);
            } else if (key == "output") {
                cfg.output = as_scalar(v, key);
            } else {
                throw std::invalid_argument("unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("line " + std::to_string(entry.second) + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("config file not found: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string to_config_text(const ExperimentConfig& cfg) {
    auto join = [](const auto& xs, auto fmt) {
        std::string s = "[";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) s += ", ";
            s += fmt(xs[i]);
        }
        return s + "]";
    };
    std::ostringstream os;
    os << "experiment = " << to_string(cfg.id) << '\n'
       << "arms = " << join(cfg.arms, [](const Arm& a) { return '"' + a.label() + '"'; }) << '\n'
       << "P = " << join(cfg.sensors, [](int p) { return std::to_string(p); }) << '\n'
       << "L = " << join(cfg.snapshots, [](int l) { return std::to_string(l); }) << '\n'
       << "snr_db = " << join(cfg.snr_db, shortest) << '\n'
       << "delta = " << join(cfg.delta, [](const DeltaSpec& d) { return '"' + d.to_string() + '"'; }) << '\n'
       << "dynamic_range = " << join(cfg.dynamic_range, shortest) << '\n'
       << "sources = " << cfg.num_sources << '\n'
       << "trials = " << cfg.trials << '\n'
       << "base_seed = " << cfg.base_seed << '\n'
       << "p_min = " << shortest(cfg.p_min) << '\n'
       << "omega_start = " << shortest(cfg.omega_start) << '\n';
    if (!cfg.output.empty()) os << "output = \"" << cfg.output << "\"\n";
    return os.str();
}

std::vector<std::string> preset_names() {
    return {"fig1", "fig2", "fig3", "fig4", "fig5"};
}

ExperimentConfig preset(std::string_view name) {
    const Arm ula_co{ArrayKind::ula, Method::coarray};
    const Arm ula_direct{ArrayKind::ula, Method::direct};
    const Arm nested_co{ArrayKind::nested, Method::coarray};

    ExperimentConfig cfg;
    cfg.trials = 200;
    cfg.base_seed = 1;
    cfg.dynamic_range = {1.0};
    if (name == "fig1") {
        cfg.id = ExperimentId::fig1_coarray_vs_direct;
        cfg.arms = {ula_co, ula_direct, nested_co};
        cfg.sensors = {20};
        cfg.snapshots = {100};
        cfg.snr_db = {-20, -15, -10, -5, 0, 5, 10, 15, 20};
        cfg.delta = {DeltaSpec{2, 1}};
        cfg.num_sources = 4;
    } else if (name == "fig2") {
        cfg.id = ExperimentId::fig2_prob_resolution;
        cfg.arms = {ula_co, nested_co};
        cfg.sensors = {20};
        cfg.snapshots = {55, 600};
        cfg.snr_db = {0, -16};
        for (double d : {0.0025, 0.004, 0.006, 0.008, 0.01, 0.015, 0.02, 0.03, 0.04, 0.06, 0.08,
                         0.1, 0.15, 0.2}) {
            cfg.delta.push_back(DeltaSpec{d, 0});
        }
        cfg.num_sources = 2;
    } else if (name == "fig3") {
        cfg.id = ExperimentId::fig3_snr_snapshot_grid;
        cfg.arms = {ula_co, nested_co};
        cfg.sensors = {20};
        cfg.snapshots = {10, 20, 50, 100, 200, 500, 1000, 2000};
        cfg.snr_db = {-20, -15, -10, -5, 0, 5, 10, 15};
        cfg.delta = {DeltaSpec{2, 1}, DeltaSpec{2, 2}};
        cfg.num_sources = 2;
    } else if (name == "fig4") {
        cfg.id = ExperimentId::fig4_error_vs_sensors;
        cfg.arms = {ula_co, nested_co};
        cfg.sensors = {10, 12, 14, 16, 18, 20};
        cfg.snapshots = {50};
        cfg.snr_db = {0};
        cfg.delta = {DeltaSpec{1, 1.5}, DeltaSpec{1, 2}};
        cfg.num_sources = 4;
    } else if (name == "fig5") {
        cfg.id = ExperimentId::fig5_dynamic_range;
        cfg.arms = {ula_co, nested_co};
        cfg.sensors = {20};
        cfg.snapshots = {10, 20, 50, 100, 200, 500, 1000, 2000, 5000};
        cfg.snr_db = {0};
        cfg.delta = {DeltaSpec{1, 1}};
        cfg.dynamic_range = {1, 10};
        cfg.p_min = 0.2;
        cfg.num_sources = 2;
    } else {
        throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
    }
    cfg.output = std::string(name) + ".csv";
    cfg.validate();
    return cfg;
}

}  // namespace coarray
