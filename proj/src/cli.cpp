#include "coarray/cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coarray/bounds.hpp"
#include "coarray/esprit.hpp"
#include "coarray/estimation.hpp"
#include "coarray/experiment.hpp"
#include "coarray/geometry.hpp"
#include "coarray/metrics.hpp"
#include "coarray/signal_model.hpp"

namespace coarray {

namespace {

using json = nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json complex_list(const std::vector<Complex>& zs) {
    json out = json::array();
    for (const auto& z : zs) out.push_back({z.real(), z.imag()});
    return out;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct SceneArgs {
    std::vector<double> omegas;
    std::vector<double> powers;
    std::optional<double> noise;
    std::optional<double> snr_db;

    void add(CLI::App& app) {
        app.add_option("--omegas", omegas, "Source frequencies in [0,1)")->required()->delimiter(',');
        app.add_option("--powers", powers, "Source powers (default all 1)")->delimiter(',');
        auto* n = app.add_option("--noise", noise, "Noise power sigma^2");
        auto* s = app.add_option("--snr-db", snr_db, "SNR of the weakest source in dB");
        n->excludes(s);
    }

    SourceScene build() const {
        std::vector<double> p = powers.empty() ? std::vector<double>(omegas.size(), 1.0) : powers;
        if (p.size() != omegas.size()) throw UsageError("--powers must match --omegas in length");
        if (snr_db) return SourceScene::with_snr_db(omegas, p, *snr_db);
        return SourceScene(omegas, p, noise.value_or(0.0));
    }
};

json geometry_json(const SensorArray& array) {
    json j;
    j["positions"] = std::vector<int>(array.positions().begin(), array.positions().end());
    const CoarrayStructure c = coarray_structure(array);
    j["num_sensors"] = c.num_sensors;
    j["max_lag"] = c.max_lag;
    j["m_ca"] = c.m_ca;
    j["hole_free"] = c.hole_free;
    j["difference_set"] = c.difference_set;
    json w = json::object();
    for (int i = 0; i <= c.max_lag; ++i) {
        if (c.weight(i) > 0) w[std::to_string(i)] = c.weight(i);
    }
    j["weights"] = w;
    j["redundancy"] = c.hole_free ? json(redundancy_coefficient(c)) : json(nullptr);
    return j;
}

int run_estimate(const std::string& array_spec, const SceneArgs& sa, int snapshots,
                 std::uint64_t seed, const std::string& method, int grid_mult, std::ostream& out) {
    const SensorArray array = parse_array_spec(array_spec);
    const SourceScene scene = sa.build();
    const int s = static_cast<int>(scene.num_sources());
    const CoarrayStructure c = coarray_structure(array);

    CMatrix r = true_covariance(array, scene);
    if (snapshots > 0) r = sample_covariance(sample_snapshots(array, scene, snapshots, seed));

    DoaEstimate est;
    if (method == "coarray") est = coarray_esprit_from_covariance(r, array, c, s);
    else est = direct_esprit_from_covariance(r, array, s);

    json j;
    j["array"] = array_spec;
    j["method"] = method;
    j["snapshots"] = snapshots;
    if (snapshots > 0) j["seed"] = seed;
    j["omegas"] = scene.omegas();
    j["omegas_hat"] = est.omegas_hat;
    j["psi_eigenvalues"] = complex_list(est.psi_eigenvalues);
    j["matching_distance"] = matching_distance(scene.omegas(), est.omegas_hat);
    json d;
    d["subspace_eigenvalues"] =
        std::vector<double>(est.diagnostics.subspace_eigenvalues.begin(),
                            est.diagnostics.subspace_eigenvalues.end());
    d["next_eigenvalue"] = est.diagnostics.next_eigenvalue;
    d["degenerate_gap"] = est.diagnostics.degenerate_gap;
    d["u0_condition"] = number(est.diagnostics.u0_condition);
    j["diagnostics"] = d;
    if (snapshots > 0 && c.hole_free) {
        const auto exact = exact_coarray_covariance(c, scene);
        const auto t_hat = redundancy_average(r, c, array, EstimatedProvenance{snapshots, seed});
        j["coarray_error"] = covariance_error(exact, t_hat);
        j["grid_sup_bound"] = grid_sup_bound(exact, t_hat, grid_mult);
        j["grid_mult"] = grid_mult;
    }
    out << j.dump(2) << '\n';
    return kExitOk;
}

int run_bounds(const std::string& array_spec, const SceneArgs& sa, double epsilon, double delta,
               std::optional<double> snapshots, const std::string& constants, std::ostream& out) {
    const SensorArray array = parse_array_spec(array_spec);
    const SourceScene scene = sa.build();
    const BoundConstants k = parse_constants(constants);
    const BoundReport r = bound_report(scene, array, epsilon, delta, k);

    json j;
    j["array"] = array_spec;
    j["constants"] = {{"c", k.c}, {"c1", k.c1()}, {"c2", k.c2}, {"c3", k.c3()}, {"gamma", k.gamma}};
    j["m_ca"] = r.m_ca;
    j["redundancy"] = r.redundancy;
    j["ry_norm"] = r.ry_norm;
    j["sigma_s_coarray"] = r.sigma_s_coarray;
    j["beta"] = r.beta;
    j["eigen_gap_ok"] = r.eigen_gap_ok;
    j["c_s"] = r.c_s;
    j["c_s_prime"] = r.c_s_prime;
    if (r.eigen_gap_ok) {
        j["q"] = r.q;
        j["q1"] = r.q1;
        j["l0"] = r.l0;
        const auto& req = r.requirement;
        j["snapshot_requirement"] = {
            {"value", req.value},         {"terms", req.terms},
            {"active_term", req.active_term}, {"log_factor", req.log_factor},
            {"epsilon_cap", req.epsilon_cap}, {"small_eps_regime", req.small_eps_regime}};
    }
    if (snapshots) {
        j["tail_bound"] = {{"epsilon", epsilon},
                           {"L", *snapshots},
                           {"probability", tail_bound(epsilon, *snapshots, r.ry_norm,
                                                      r.redundancy, r.m_ca, k)}};
    }

    std::optional<Regime> regime;
    if (array.is_ula()) regime = Regime::ula;
    else if (array.size() >= 2 && array == balanced_nested(static_cast<int>(array.size())))
        regime = Regime::nested;
    if (regime) {
        SpecializedParams p;
        p.num_sensors = static_cast<int>(array.size());
        p.num_sources = static_cast<int>(scene.num_sources());
        p.p_min = scene.p_min();
        p.p_max = scene.p_max();
        p.noise_power = scene.noise_power();
        p.epsilon = epsilon;
        p.delta = delta;
        p.separation = scene.num_sources() >= 2 ? min_separation(scene.omegas()) : 0.5;
        const SpecializedBound b = specialized_bounds(*regime, p, k);
        j["specialized"] = {{"regime", *regime == Regime::ula ? "ula" : "nested"},
                            {"value", b.value},
                            {"geometry_constant", b.geometry_constant},
                            {"c_prime", b.c_prime},
                            {"epsilon_cap", b.epsilon_cap},
                            {"separation_ok", b.separation_ok},
                            {"snr_ok", b.snr_ok},
                            {"epsilon_ok", b.epsilon_ok},
                            {"sensors_ok", b.sensors_ok},
                            {"delta_ok", b.delta_ok},
                            {"preconditions_hold", b.preconditions_hold()}};
        try {
            const double floor =
                *regime == Regime::ula
                    ? vandermonde_floor(p.num_sensors, scene.omegas(), k.gamma)
                    : nested_vandermonde_floor(p.num_sensors, scene.omegas(), k.gamma);
            j["specialized"]["sigma_floor_sq"] = floor;
        } catch (const std::invalid_argument&) {
            j["specialized"]["sigma_floor_sq"] = nullptr;
        }
    }
    out << j.dump(2) << '\n';
    return kExitOk;
}

int run_experiment_cmd(const std::string& config_path, const std::string& preset_name,
                       const std::string& output, const std::string& trials_csv,
                       std::optional<int> trials, int threads, std::ostream& out,
                       std::ostream& err) {
    if (config_path.empty() == preset_name.empty()) {
        throw UsageError("give exactly one of <config> or --preset");
    }
    ExperimentConfig cfg = preset_name.empty() ? load_config(config_path) : preset(preset_name);
    if (trials) cfg.trials = *trials;
    if (!output.empty()) cfg.output = output;
    const Dataset ds = run_experiment(cfg, threads);
    if (cfg.output.empty() || cfg.output == "-") {
        out << format_csv(ds.aggregates);
    } else {
        emit_csv(ds, cfg.output);
        err << "wrote " << ds.aggregates.size() << " rows to " << cfg.output << '\n';
    }
    if (!trials_csv.empty()) {
        std::ofstream f(trials_csv, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open '" + trials_csv + "' for writing");
        f << format_trials_csv(ds);
    }
    return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Coarray ESPRIT direction-of-arrival lab", "coarray-lab"};
    app.require_subcommand(1);

    // estimate
    auto* est = app.add_subcommand("estimate", "Estimate source frequencies from one scene");
    std::string est_array;
    SceneArgs est_scene;
    int est_snapshots = 0;
    std::uint64_t est_seed = 1;
    std::string est_method = "coarray";
    est->add_option("--array", est_array, "nested:N1,N2 | ula:P | custom:[...]")->required();
    est_scene.add(*est);
    est->add_option("-L,--snapshots", est_snapshots, "Snapshots (0 = exact covariance)")
        ->check(CLI::NonNegativeNumber);
    est->add_option("--seed", est_seed, "RNG seed");
    est->add_option("--method", est_method, "coarray | direct")
        ->check(CLI::IsMember({"coarray", "direct"}));
    int est_grid_mult = 1;
    est->add_option("--grid-mult", est_grid_mult, "Grid refinement for the grid-sup diagnostic")
        ->check(CLI::PositiveNumber);

    // bounds
    auto* bnd = app.add_subcommand("bounds", "Evaluate the finite-snapshot bounds");
    std::string bnd_array;
    SceneArgs bnd_scene;
    double bnd_eps = 0.01;
    double bnd_delta = 0.05;
    std::optional<double> bnd_l;
    std::string bnd_constants;
    bnd->add_option("--array", bnd_array, "Array spec")->required();
    bnd_scene.add(*bnd);
    bnd->add_option("--epsilon", bnd_eps, "Target matching distance")->check(CLI::PositiveNumber);
    bnd->add_option("--delta", bnd_delta, "Failure probability")->check(CLI::Range(0.0, 1.0));
    bnd->add_option("-L,--snapshots", bnd_l, "Also evaluate the tail bound at L")
        ->check(CLI::PositiveNumber);
    bnd->add_option("--constants", bnd_constants, "Overrides, e.g. c=0.5,gamma=3");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Monte Carlo experiments");
    exp->require_subcommand(1);
    auto* run = exp->add_subcommand("run", "Run an experiment config and write CSV");
    std::string run_config;
    std::string run_preset;
    std::string run_output;
    std::string run_trials_csv;
    std::optional<int> run_trials;
    int run_threads = 0;
    run->add_option("config", run_config, "Config file");
    run->add_option("--preset", run_preset, "Run a built-in preset instead of a file");
    run->add_option("-o,--output", run_output, "CSV path ('-' for stdout)");
    run->add_option("--trials-csv", run_trials_csv, "Also write per-trial records");
    run->add_option("--trials", run_trials, "Override trial count")->check(CLI::PositiveNumber);
    run->add_option("--threads", run_threads, "Worker threads (capped by COARRAY_LAB_THREADS)")
        ->check(CLI::NonNegativeNumber);
    auto* list = exp->add_subcommand("list-presets", "List built-in presets");
    auto* show = exp->add_subcommand("show-preset", "Print a preset as config text");
    std::string show_name;
    show->add_option("name", show_name, "Preset name")->required();

    // geometry
    auto* geo = app.add_subcommand("geometry", "Array geometry tools");
    geo->require_subcommand(1);
    auto* inspect = geo->add_subcommand("inspect", "Difference coarray of an array");
    std::string geo_array;
    inspect->add_option("--array", geo_array, "Array spec")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*est) return run_estimate(est_array, est_scene, est_snapshots, est_seed, est_method,
                                    est_grid_mult, out);
        if (*bnd) {
            return run_bounds(bnd_array, bnd_scene, bnd_eps, bnd_delta, bnd_l, bnd_constants, out);
        }
        if (*run) {
            return run_experiment_cmd(run_config, run_preset, run_output, run_trials_csv,
                                      run_trials, run_threads, out, err);
        }
        if (*list) {
            for (const auto& name : preset_names()) {
                out << name << '\t' << to_string(preset(name).id) << '\n';
            }
            return kExitOk;
        }
        if (*show) {
            out << to_config_text(preset(show_name));
            return kExitOk;
        }
        if (*inspect) {
            out << geometry_json(parse_array_spec(geo_array)).dump(2) << '\n';
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace coarray
