#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bpsi/grid.hpp"
#include "bpsi/kernel.hpp"
#include "bpsi/metrics.hpp"
#include "bpsi/perturb.hpp"
#include "bpsi/regularize.hpp"
#include "bpsi/sources.hpp"

namespace bpsi {

struct ExperimentConfig {
    struct Domain {
        double A = SpatialGrid::kDefaultLeft;
        double B = SpatialGrid::kDefaultRight;
        std::size_t L = SpatialGrid::kDefaultSize;
    };
    struct Spatial {
        std::string kind = "gaussian";
        double amplitude = 1.0;
        double width = 1.0;
        double center = 0.0;
    };
    struct Temporal {
        std::string kind = "constant";
        double c = 1.0;
        double a = 1.0;
        double b = 0.0;
        double theta = 0.5;
        double b0 = 1.0;
        double xi = 0.0;
        std::string table;  ///< CSV path for kind = sampled
    };
    struct Source {
        Spatial f;
        Temporal psi;
        double T = 1.0;
        double sigma = 1.0;
        double gamma = 2.0;
    };
    struct Noise {
        NoiseModel model = NoiseModel::pointwise;
        std::vector<double> eps;
        std::uint64_t seed_base = 0;
        int seeds_per_eps = 1;
        NoiseTarget target = NoiseTarget::data_h;
    };
    struct Reg {
        FilterKind filter = FilterKind::truncation;
        std::optional<double> alpha;  ///< empty: a-priori rule
        double s = 0.0;
        double beta = 1.0;
        double q = 4.0;
    };
    struct Output {
        std::string directory = "out";
        bool emit_fields = true;
        std::size_t field_stride = 1;
        std::optional<double> data_epsilon;  ///< row used for data.csv; first row if empty
    };

    Domain domain;
    Source source;
    Noise noise;
    Reg reg;
    Output output;

    /// Parses a config tree; missing keys take defaults, bad values raise
    /// ConfigError naming the field path (e.g. "noise.eps[2]").
    static ExperimentConfig from_json(const nlohmann::json& tree);
    static ExperimentConfig from_file(const std::filesystem::path& path);
    /// Every field, defaults included.
    nlohmann::json to_json() const;

    SpatialGrid grid() const;
    TemporalSource psi() const;
    SpatialSourceSpec f() const;
    RegularizationConfig regularization() const;
    /// Seed of replicate i in eps row r.
    std::uint64_t cell_seed(std::size_t row, int replicate) const;
};

struct ExperimentReport {
    double epsilon = 0.0;
    double alpha = 0.0;
    std::uint64_t seed = 0;
    double e_abs = 0.0;
    double e_rel = 0.0;
    FilterKind filter = FilterKind::truncation;
    std::size_t mask_size = 0;
    double noise_h_l2 = 0.0;    ///< discrete ||h - h~||_2
    double noise_psi_l1 = 0.0;  ///< ||psi - psi~||_1
    std::string grid;           ///< "A,B,L"

    nlohmann::json to_json() const;
};

struct RowSummary {
    double epsilon = 0.0;
    double alpha = 0.0;
    double median_e_abs = 0.0;
    double median_e_rel = 0.0;
    std::vector<double> reconstruction;  ///< first replicate
    std::vector<double> noisy_data;      ///< first replicate
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<ExperimentReport> reports;  ///< ordered by (eps row, replicate)
    std::vector<RowSummary> rows;
    std::vector<double> x;
    std::vector<double> f_exact;
    std::vector<double> h_exact;
    KernelProfile profile;  ///< kernel of the exact psi
    std::optional<RateFit> rate_fit;
    std::optional<AlphaChoice> first_rule;  ///< rule details for row 0 (rule-derived alpha only)
    double theoretical_exponent = 0.0;

    nlohmann::json summary_json() const;
};

/// forward -> perturb -> regularize -> metrics for every (eps, seed) cell.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// results.csv, kernel.csv and report.json; then emit_plot_data.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& directory);

/// data.csv (x,h_true,h_noisy) and, when fields are enabled, fields.csv
/// (epsilon,x,f_exact,f_rec) plus fields_<k>.csv (x,f_exact,f_rec) per row.
/// An empty result produces header-only files.
void emit_plot_data(const ExperimentResult& result, const std::filesystem::path& directory);

/// kernel.csv for a config's psi/grid and zeros.csv from find_zeros(psi, nu_max).
nlohmann::json write_kernel_dump(const ExperimentConfig& config, double nu_max,
                                 const std::filesystem::path& directory);

/// unstable.csv (x,f_n,h_n) for the instability witness of order n.
nlohmann::json write_instability_dump(const ExperimentConfig& config, int n,
                                      const std::filesystem::path& directory);

/// Fixed CSV headers of the file contract.
inline constexpr const char* kResultsHeader = "epsilon,alpha,seed,E_abs,E_rel,filter,mask_size";
inline constexpr const char* kKernelHeader = "nu,H,in_omega,in_pi";
inline constexpr const char* kDataHeader = "x,h_true,h_noisy";
inline constexpr const char* kFieldsHeader = "epsilon,x,f_exact,f_rec";
inline constexpr const char* kFieldRowHeader = "x,f_exact,f_rec";
inline constexpr const char* kZerosHeader = "nu,confirmed";
inline constexpr const char* kUnstableHeader = "x,f_n,h_n";

}  // namespace bpsi
