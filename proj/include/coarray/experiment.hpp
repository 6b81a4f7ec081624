#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coarray/esprit.hpp"
#include "coarray/geometry.hpp"

namespace coarray {

enum class ExperimentId {
    fig1_coarray_vs_direct,
    fig2_prob_resolution,
    fig3_snr_snapshot_grid,
    fig4_error_vs_sensors,
    fig5_dynamic_range,
    custom,
};

const char* to_string(ExperimentId id);
ExperimentId parse_experiment_id(std::string_view name);

enum class ArrayKind { ula, nested };
enum class Method { coarray, direct };

/// One estimator/geometry combination, labelled `<array>:<method>`.
struct Arm {
    ArrayKind array = ArrayKind::ula;
    Method method = Method::coarray;

    std::string label() const;
    SensorArray build(int num_sensors) const;
    static Arm parse(std::string_view label);

    bool operator==(const Arm&) const = default;
};

/// Separation given either as an absolute value (exponent 0) or as
/// coeff / P^exponent.
struct DeltaSpec {
    double coeff = 0.1;
    double exponent = 0;

    double evaluate(int num_sensors) const;
    std::string to_string() const;
    static DeltaSpec parse(std::string_view text);

    bool operator==(const DeltaSpec&) const = default;
};

struct ExperimentConfig {
    ExperimentId id = ExperimentId::custom;
    std::vector<Arm> arms;
    std::vector<int> sensors;          // P axis
    std::vector<int> snapshots;        // L axis
    std::vector<double> snr_db;        // 10 log10(p_min / sigma^2)
    std::vector<DeltaSpec> delta;      // source spacing
    std::vector<double> dynamic_range; // p_max / p_min
    int num_sources = 2;
    int trials = 200;
    std::uint64_t base_seed = 1;
    double p_min = 1.0;
    double omega_start = 0.1;
    std::string output;

    /// Throws std::invalid_argument describing the first problem found.
    void validate() const;
    std::size_t grid_size() const;
};

struct GridPoint {
    int num_sensors = 0;
    int num_snapshots = 0;
    double snr_db = 0;
    double delta = 0;
    double dynamic_range = 1;
};

/// Grid points in lexicographic axis order (P, L, snr, delta, dynamic range).
std::vector<GridPoint> expand_grid(const ExperimentConfig& cfg);

/// Sources at omega_start + i delta (mod 1). The first one gets
/// dynamic_range * p_min and the others p_min. Noise follows from the SNR
/// relative to p_min.
SourceScene scene_for(const ExperimentConfig& cfg, const GridPoint& g);

struct TrialRecord {
    std::size_t arm_index = 0;
    std::size_t grid_index = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double md = 0;
    bool resolved = false;
    double cov_error = 0;
    std::optional<FailureStage> failure;
};

struct Aggregate {
    std::string arm;
    GridPoint grid;
    int trials = 0;
    double mean_md = 0;     // over non-failed trials
    double median_md = 0;   // over non-failed trials
    double prob_resolved = 0;  // failures count as unresolved
    double mean_cov_error = 0; // over all trials
    int failures = 0;
};

struct Dataset {
    ExperimentConfig config;
    std::vector<GridPoint> grid;
    std::vector<TrialRecord> records;  // ordered by (arm, grid, trial)
    std::vector<Aggregate> aggregates; // ordered by (arm label, grid coords)
};

/// Runs a single Monte Carlo trial. Never throws on estimation failure.
TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t arm_index,
                      const GridPoint& g, std::size_t grid_index, std::size_t trial);

/// OpenMP-parallel over trials. threads <= 0 means the OpenMP default;
/// COARRAY_LAB_THREADS caps the count either way.
Dataset run_experiment(const ExperimentConfig& cfg, int threads = 0);

/// Single-threaded reference; produces the same dataset as run_experiment.
Dataset run_experiment_serial(const ExperimentConfig& cfg);

std::vector<Aggregate> aggregate(const ExperimentConfig& cfg, const std::vector<GridPoint>& grid,
                                 const std::vector<TrialRecord>& records);

/// Thread count from COARRAY_LAB_THREADS, or 0 when unset.
int threads_from_env();

std::string format_csv(const std::vector<Aggregate>& aggregates);

/// Writes the aggregate CSV. Throws std::runtime_error when there is
/// nothing to write or the file cannot be opened.
void emit_csv(const Dataset& dataset, const std::string& path);

/// Per-trial CSV, one row per TrialRecord.
std::string format_trials_csv(const Dataset& dataset);

// Config files ------------------------------------------------------------

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);
std::string to_config_text(const ExperimentConfig& cfg);

std::vector<std::string> preset_names();
ExperimentConfig preset(std::string_view name);

}  // namespace coarray
