#include "bpsi/experiment.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "bpsi/errors.hpp"
#include "bpsi/forward.hpp"
#include "bpsi/metrics.hpp"
#include "bpsi/philox.hpp"

namespace bpsi {

using nlohmann::json;

namespace {

constexpr std::uint64_t kSeedRowStride = 1000;

// ---- config parsing ---------------------------------------------------------

const json* child(const json& node, const char* key) {
    if (!node.is_object()) return nullptr;
    const auto it = node.find(key);
    return it == node.end() ? nullptr : &*it;
}

void expect_object(const json& node, const std::string& path) {
    if (!node.is_object()) throw ConfigError(path + ": expected an object");
}

double read_number(const json& node, const char* key, const std::string& path, double fallback) {
    const json* v = child(node, key);
    if (v == nullptr) return fallback;
    if (!v->is_number()) throw ConfigError(path + "." + key + ": expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) throw ConfigError(path + "." + key + ": must be finite");
    return d;
}

std::string read_string(const json& node, const char* key, const std::string& path,
                        const std::string& fallback) {
    const json* v = child(node, key);
    if (v == nullptr) return fallback;
    if (!v->is_string()) throw ConfigError(path + "." + key + ": expected a string");
    return v->get<std::string>();
}

bool read_bool(const json& node, const char* key, const std::string& path, bool fallback) {
    const json* v = child(node, key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) throw ConfigError(path + "." + key + ": expected true or false");
    return v->get<bool>();
}

std::uint64_t read_unsigned(const json& node, const char* key, const std::string& path,
                            std::uint64_t fallback) {
    const json* v = child(node, key);
    if (v == nullptr) return fallback;
    if (!v->is_number_integer() || (v->is_number_integer() && v->get<std::int64_t>() < 0 &&
                                    !v->is_number_unsigned())) {
        throw ConfigError(path + "." + key + ": expected a non-negative integer");
    }
    return v->get<std::uint64_t>();
}

template <class Parse>
auto with_path(const std::string& path, Parse&& parse) {
    try {
        return parse();
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

// ---- CSV ------------------------------------------------------------------

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvFile {
public:
    CsvFile(const std::filesystem::path& path, const char* header) : path_(path) {
        out_.open(path, std::ios::binary | std::ios::trunc);
        if (!out_) throw IoError("cannot write " + path.string());
        out_ << header << '\n';
    }
    template <class... Cells>
    void row(const Cells&... cells) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cells, first = false), ...);
        out_ << '\n';
    }
    ~CsvFile() = default;
    void close() {
        out_.close();
        if (!out_) throw IoError("failed writing " + path_.string());
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string());
    }
}

void write_json(const std::filesystem::path& path, const json& doc) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

template <class Fn>
void parallel_cells(std::size_t n, bool parallel, Fn&& fn) {
    const std::size_t workers =
        parallel ? std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16) : 1;
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

// ---- ExperimentConfig ---------------------------------------------------------

ExperimentConfig ExperimentConfig::from_json(const json& tree) {
    ExperimentConfig cfg;
    expect_object(tree, "config");

    if (const json* d = child(tree, "domain")) {
        expect_object(*d, "domain");
        cfg.domain.A = read_number(*d, "A", "domain", cfg.domain.A);
        cfg.domain.B = read_number(*d, "B", "domain", cfg.domain.B);
        cfg.domain.L = read_unsigned(*d, "L", "domain", cfg.domain.L);
        if (!(cfg.domain.A < cfg.domain.B)) throw ConfigError("domain: A must be < B");
        if (cfg.domain.L < 4) throw ConfigError("domain.L: must be >= 4");
    }

    if (const json* s = child(tree, "source")) {
        expect_object(*s, "source");
        cfg.source.T = read_number(*s, "T", "source", cfg.source.T);
        cfg.source.sigma = read_number(*s, "sigma", "source", cfg.source.sigma);
        cfg.source.gamma = read_number(*s, "gamma", "source", cfg.source.gamma);
        if (!(cfg.source.T > 0.0)) throw ConfigError("source.T: must be positive");
        if (!(cfg.source.sigma > 0.0 && cfg.source.sigma <= 1.0)) {
            throw ConfigError("source.sigma: must lie in (0, 1]");
        }
        if (!(cfg.source.gamma >= 0.0)) throw ConfigError("source.gamma: must be >= 0");
        if (const json* f = child(*s, "f")) {
            expect_object(*f, "source.f");
            auto& sp = cfg.source.f;
            sp.kind = read_string(*f, "kind", "source.f", sp.kind);
            if (sp.kind != "gaussian") {
                throw ConfigError("source.f.kind: unknown kind '" + sp.kind + "' (expected gaussian)");
            }
            sp.amplitude = read_number(*f, "amplitude", "source.f", sp.amplitude);
            sp.width = read_number(*f, "width", "source.f", sp.width);
            sp.center = read_number(*f, "center", "source.f", sp.center);
            if (!(sp.width > 0.0)) throw ConfigError("source.f.width: must be positive");
        }
        if (const json* p = child(*s, "psi")) {
            expect_object(*p, "source.psi");
            auto& tp = cfg.source.psi;
            tp.kind = read_string(*p, "kind", "source.psi", tp.kind);
            tp.c = read_number(*p, "c", "source.psi", tp.c);
            tp.a = read_number(*p, "a", "source.psi", tp.a);
            tp.b = read_number(*p, "b", "source.psi", tp.b);
            tp.theta = read_number(*p, "theta", "source.psi", tp.theta);
            tp.b0 = read_number(*p, "b0", "source.psi", tp.b0);
            tp.xi = read_number(*p, "xi", "source.psi", tp.xi);
            tp.table = read_string(*p, "table", "source.psi", tp.table);
            if (tp.kind != "constant" && tp.kind != "affine" && tp.kind != "power_singular" &&
                tp.kind != "sampled") {
                throw ConfigError("source.psi.kind: unknown kind '" + tp.kind +
                                  "' (expected constant, affine, power_singular or sampled)");
            }
            if (tp.kind == "power_singular" && !(tp.theta < 1.0)) {
                throw ConfigError("source.psi.theta: must be < 1 for psi in L^1");
            }
            if (tp.kind == "sampled" && tp.table.empty()) {
                throw ConfigError("source.psi.table: required for kind sampled");
            }
        }
    }

    if (const json* n = child(tree, "noise")) {
        expect_object(*n, "noise");
        cfg.noise.model = with_path("noise.model", [&] {
            return parse_noise_model(read_string(*n, "model", "noise", "pointwise"));
        });
        cfg.noise.target = with_path("noise.target", [&] {
            return parse_noise_target(read_string(*n, "target", "noise", "data_h"));
        });
        cfg.noise.seed_base = read_unsigned(*n, "seed_base", "noise", cfg.noise.seed_base);
        const auto reps = read_unsigned(*n, "seeds_per_eps", "noise", 1);
        if (reps < 1 || reps >= kSeedRowStride) {
            throw ConfigError("noise.seeds_per_eps: must lie in [1, 999]");
        }
        cfg.noise.seeds_per_eps = static_cast<int>(reps);
        if (const json* e = child(*n, "eps")) {
            if (!e->is_array()) throw ConfigError("noise.eps: expected an array");
            for (std::size_t i = 0; i < e->size(); ++i) {
                const auto& v = (*e)[i];
                const std::string path = "noise.eps[" + std::to_string(i) + "]";
                if (!v.is_number()) throw ConfigError(path + ": expected a number");
                const double eps = v.get<double>();
                if (!(eps > 0.0) || !std::isfinite(eps)) {
                    throw ConfigError(path + ": must be strictly positive");
                }
                cfg.noise.eps.push_back(eps);
            }
        }
    }
    if (cfg.noise.eps.empty()) throw ConfigError("noise.eps: at least one noise level is required");

    if (const json* r = child(tree, "reg")) {
        expect_object(*r, "reg");
        cfg.reg.filter = with_path("reg.filter", [&] {
            return parse_filter(read_string(*r, "filter", "reg", "truncation"));
        });
        if (const json* a = child(*r, "alpha")) {
            if (a->is_string()) {
                if (a->get<std::string>() != "rule") {
                    throw ConfigError("reg.alpha: expected \"rule\" or a positive number");
                }
            } else if (a->is_number() && a->get<double>() > 0.0) {
                cfg.reg.alpha = a->get<double>();
            } else {
                throw ConfigError("reg.alpha: expected \"rule\" or a positive number");
            }
        }
        cfg.reg.s = read_number(*r, "s", "reg", cfg.reg.s);
        cfg.reg.beta = read_number(*r, "beta", "reg", cfg.reg.beta);
        cfg.reg.q = read_number(*r, "q", "reg", cfg.reg.q);
    }
    with_path("reg", [&] {
        cfg.regularization().validate();
        return 0;
    });

    if (const json* o = child(tree, "output")) {
        expect_object(*o, "output");
        cfg.output.directory = read_string(*o, "directory", "output", cfg.output.directory);
        cfg.output.emit_fields = read_bool(*o, "emit_fields", "output", cfg.output.emit_fields);
        cfg.output.field_stride = read_unsigned(*o, "field_stride", "output", 1);
        if (cfg.output.field_stride < 1) throw ConfigError("output.field_stride: must be >= 1");
        if (const json* de = child(*o, "data_epsilon"); de != nullptr && !de->is_null()) {
            if (!de->is_number()) throw ConfigError("output.data_epsilon: expected a number");
            const double v = de->get<double>();
            if (std::find(cfg.noise.eps.begin(), cfg.noise.eps.end(), v) == cfg.noise.eps.end()) {
                throw ConfigError("output.data_epsilon: must be one of noise.eps");
            }
            cfg.output.data_epsilon = v;
        }
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    json tree;
    try {
        tree = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return from_json(tree);
}

json ExperimentConfig::to_json() const {
    const auto& f = source.f;
    const auto& p = source.psi;
    json psi_json = {{"kind", p.kind}, {"c", p.c},         {"a", p.a},  {"b", p.b},
                     {"theta", p.theta}, {"b0", p.b0}, {"xi", p.xi}, {"table", p.table}};
    return {
        {"domain", {{"A", domain.A}, {"B", domain.B}, {"L", domain.L}}},
        {"source",
         {{"f", {{"kind", f.kind}, {"amplitude", f.amplitude}, {"width", f.width},
                 {"center", f.center}}},
          {"psi", psi_json},
          {"T", source.T},
          {"sigma", source.sigma},
          {"gamma", source.gamma}}},
        {"noise",
         {{"model", to_string(noise.model)},
          {"eps", noise.eps},
          {"seed_base", noise.seed_base},
          {"seeds_per_eps", noise.seeds_per_eps},
          {"target", to_string(noise.target)}}},
        {"reg",
         {{"filter", to_string(reg.filter)},
          {"alpha", reg.alpha ? json(*reg.alpha) : json("rule")},
          {"s", reg.s},
          {"beta", reg.beta},
          {"q", reg.q}}},
        {"output",
         {{"directory", output.directory},
          {"emit_fields", output.emit_fields},
          {"field_stride", output.field_stride},
          {"data_epsilon", output.data_epsilon ? json(*output.data_epsilon) : json(nullptr)}}},
    };
}

SpatialGrid ExperimentConfig::grid() const { return make_grid(domain.A, domain.B, domain.L); }

TemporalSource ExperimentConfig::psi() const {
    const auto& p = source.psi;
    if (p.kind == "constant") return TemporalSource::constant(p.c, source.T);
    if (p.kind == "affine") return TemporalSource::affine(p.a, p.b, source.T);
    if (p.kind == "power_singular") {
        return TemporalSource::power_singular(p.theta, p.b0, p.xi, source.T);
    }
    auto table = TemporalSource::from_csv(p.table);
    if (std::abs(table.horizon() - source.T) > 1e-12 * source.T) {
        throw ConfigError("source.psi.table: last time must equal source.T");
    }
    return table;
}

SpatialSourceSpec ExperimentConfig::f() const {
    return SpatialSourceSpec::gaussian(source.f.amplitude, source.f.width, source.f.center,
                                       source.gamma);
}

RegularizationConfig ExperimentConfig::regularization() const {
    RegularizationConfig cfg;
    cfg.filter = reg.filter;
    cfg.alpha = reg.alpha;
    cfg.s = reg.s;
    cfg.sigma = source.sigma;
    cfg.theta = source.psi.kind == "power_singular" ? std::max(source.psi.theta, 0.0) : 0.0;
    cfg.gamma = source.gamma;
    cfg.beta = reg.beta;
    cfg.q = reg.q;
    return cfg;
}

std::uint64_t ExperimentConfig::cell_seed(std::size_t row, int replicate) const {
    return noise.seed_base + kSeedRowStride * row + static_cast<std::uint64_t>(replicate);
}

// ---- reports --------------------------------------------------------------

json ExperimentReport::to_json() const {
    return {{"epsilon", epsilon},   {"alpha", alpha},           {"seed", seed},
            {"E_abs", e_abs},       {"E_rel", e_rel},           {"filter", to_string(filter)},
            {"mask_size", mask_size}, {"noise_h_l2", noise_h_l2}, {"noise_psi_l1", noise_psi_l1},
            {"grid", grid}};
}

json ExperimentResult::summary_json() const {
    json doc;
    doc["config"] = config.to_json();
    doc["prng"] = Philox4x32::kName;
    doc["seed_rule"] = "seed_base + 1000*row + replicate";
    json rows_json = json::array();
    for (const auto& r : rows) {
        rows_json.push_back({{"epsilon", r.epsilon},
                             {"alpha", r.alpha},
                             {"median_E_abs", r.median_e_abs},
                             {"median_E_rel", r.median_e_rel}});
    }
    doc["rows"] = rows_json;
    json reports_json = json::array();
    for (const auto& r : reports) reports_json.push_back(r.to_json());
    doc["reports"] = reports_json;
    const auto reg = config.regularization();
    json alpha_json;
    if (config.reg.alpha) {
        alpha_json = {{"rule", "fixed"}, {"alpha", *config.reg.alpha}};
    } else {
        alpha_json = {{"rule", "a-priori"}, {"b", effective_b(reg)}};
        if (first_rule) {
            alpha_json["exponent"] = first_rule->exponent;
            alpha_json["convergence_conditions_hold"] = first_rule->convergence_conditions_hold;
            if (!first_rule->warning.empty()) alpha_json["warning"] = first_rule->warning;
        }
    }
    doc["alpha_rule"] = alpha_json;
    doc["theoretical_exponent"] = theoretical_exponent;
    if (rate_fit) {
        doc["rate_fit"] = {{"slope", rate_fit->slope},
                           {"eps_used", rate_fit->eps_used},
                           {"eps_dropped_saturated", rate_fit->eps_dropped},
                           {"saturation_cut_E_rel", 0.40}};
    } else {
        doc["rate_fit"] = nullptr;
    }
    doc["kernel"] = {{"psi", config.psi().describe()},
                     {"psi_l1", profile.psi_l1},
                     {"max_abs_H", profile.max_abs()}};
    return doc;
}

// ---- pipeline ---------------------------------------------------------------

ExperimentResult run_experiment(const ExperimentConfig& config) {
    const SpatialGrid grid = config.grid();
    const TemporalSource psi = config.psi();
    const auto reg = config.regularization();
    reg.validate();

    ExperimentResult result{config, {}, {}, grid.nodes(), config.f().sample(grid), {},
                            build_profile(psi, grid, config.source.sigma), std::nullopt,
                            std::nullopt, 0.0};
    result.h_exact = apply_forward(result.f_exact, result.profile, grid);
    result.theoretical_exponent = effective_b(reg) > 0.0 ? theoretical_rate_exponent(reg) : 0.0;

    const auto& eps_list = config.noise.eps;
    const int reps = config.noise.seeds_per_eps;
    const std::size_t cells = eps_list.size() * static_cast<std::size_t>(reps);
    const double dx = grid.dx();
    const std::string grid_desc =
        num(grid.left()) + "," + num(grid.right()) + "," + std::to_string(grid.size());

    std::vector<double> alphas(eps_list.size());
    for (std::size_t r = 0; r < eps_list.size(); ++r) {
        if (config.reg.alpha) {
            alphas[r] = *config.reg.alpha;
        } else {
            const auto choice = select_alpha(eps_list[r], reg);
            if (r == 0) result.first_rule = choice;
            alphas[r] = choice.alpha;
        }
    }

    result.reports.resize(cells);
    result.rows.resize(eps_list.size());
    const bool per_cell_kernel = config.noise.target != NoiseTarget::data_h;
    parallel_cells(cells, !per_cell_kernel, [&](std::size_t cell) {
        const std::size_t row = cell / static_cast<std::size_t>(reps);
        const int rep = static_cast<int>(cell % static_cast<std::size_t>(reps));
        const NoiseSpec spec{eps_list[row], config.cell_seed(row, rep), config.noise.target,
                             config.noise.model};
        const auto h_noisy = perturb_data(result.h_exact, spec, grid);
        const auto psi_noisy = perturb_source(psi, spec);
        std::optional<KernelProfile> own;
        if (per_cell_kernel) own = build_profile(psi_noisy.psi, grid, config.source.sigma);
        const KernelProfile& profile = own ? *own : result.profile;
        auto rec = reconstruct(config.reg.filter, h_noisy, profile, alphas[row], grid);

        ExperimentReport& rep_out = result.reports[cell];
        rep_out.epsilon = spec.epsilon;
        rep_out.alpha = alphas[row];
        rep_out.seed = spec.seed;
        rep_out.e_abs = l2_error(result.f_exact, rec.samples, dx);
        rep_out.e_rel = relative_error(result.f_exact, rec.samples, dx);
        rep_out.filter = config.reg.filter;
        rep_out.mask_size = rec.passband_size;
        rep_out.noise_h_l2 = l2_error(result.h_exact, h_noisy, dx);
        rep_out.noise_psi_l1 = psi_noisy.achieved_l1;
        rep_out.grid = grid_desc;
        if (rep == 0) {
            result.rows[row].reconstruction = std::move(rec.samples);
            result.rows[row].noisy_data = h_noisy;
        }
    });

    std::vector<double> med_abs;
    std::vector<double> med_rel;
    for (std::size_t r = 0; r < eps_list.size(); ++r) {
        std::vector<double> ea;
        std::vector<double> er;
        for (int i = 0; i < reps; ++i) {
            const auto& rep = result.reports[r * static_cast<std::size_t>(reps) + i];
            ea.push_back(rep.e_abs);
            er.push_back(rep.e_rel);
        }
        auto& row = result.rows[r];
        row.epsilon = eps_list[r];
        row.alpha = alphas[r];
        row.median_e_abs = median(ea);
        row.median_e_rel = median(er);
        med_abs.push_back(row.median_e_abs);
        med_rel.push_back(row.median_e_rel);
    }

    bool decreasing = eps_list.size() >= 3;
    for (std::size_t r = 1; r < eps_list.size(); ++r) decreasing &= eps_list[r] < eps_list[r - 1];
    const bool positive =
        std::all_of(med_abs.begin(), med_abs.end(), [](double v) { return v > 0.0; });
    if (decreasing && positive) result.rate_fit = fit_rate_unsaturated(eps_list, med_abs, med_rel);
    return result;
}

// ---- outputs ------------------------------------------------------------------

void emit_plot_data(const ExperimentResult& result, const std::filesystem::path& directory) {
    ensure_directory(directory);
    const auto& cfg = result.config;
    const std::size_t stride = std::max<std::size_t>(1, cfg.output.field_stride);

    CsvFile data(directory / "data.csv", kDataHeader);
    if (!result.rows.empty() && !result.x.empty()) {
        std::size_t pick = 0;
        if (cfg.output.data_epsilon) {
            for (std::size_t r = 0; r < result.rows.size(); ++r) {
                if (result.rows[r].epsilon == *cfg.output.data_epsilon) pick = r;
            }
        }
        const auto& noisy = result.rows[pick].noisy_data;
        for (std::size_t j = 0; j < result.x.size(); j += stride) {
            data.row(num(result.x[j]), num(result.h_exact[j]), num(noisy[j]));
        }
    }
    data.close();

    if (!cfg.output.emit_fields) return;
    CsvFile fields(directory / "fields.csv", kFieldsHeader);
    for (std::size_t r = 0; r < result.rows.size(); ++r) {
        const auto& row = result.rows[r];
        CsvFile per_row(directory / ("fields_" + std::to_string(r) + ".csv"), kFieldRowHeader);
        for (std::size_t j = 0; j < result.x.size() && j < row.reconstruction.size(); j += stride) {
            fields.row(num(row.epsilon), num(result.x[j]), num(result.f_exact[j]),
                       num(row.reconstruction[j]));
            per_row.row(num(result.x[j]), num(result.f_exact[j]), num(row.reconstruction[j]));
        }
        per_row.close();
    }
    fields.close();
}

void write_outputs(const ExperimentResult& result, const std::filesystem::path& directory) {
    ensure_directory(directory);

    CsvFile results(directory / "results.csv", kResultsHeader);
    for (const auto& r : result.reports) {
        results.row(num(r.epsilon), num(r.alpha), r.seed, num(r.e_abs), num(r.e_rel),
                    to_string(r.filter), r.mask_size);
    }
    results.close();

    CsvFile kernel(directory / "kernel.csv", kKernelHeader);
    const double alpha = result.rows.empty() ? 0.0 : result.rows.front().alpha;
    for (std::size_t k = 0; k < result.profile.size(); ++k) {
        const double h = result.profile.values[k];
        const bool in_omega = alpha > 0.0 && std::abs(h) > alpha;
        kernel.row(num(result.profile.nu[k]), num(h), in_omega ? 1 : 0, in_omega ? 0 : 1);
    }
    kernel.close();

    emit_plot_data(result, directory);
    write_json(directory / "report.json", result.summary_json());
}

json write_kernel_dump(const ExperimentConfig& config, double nu_max,
                       const std::filesystem::path& directory) {
    ensure_directory(directory);
    const auto grid = config.grid();
    const auto psi = config.psi();
    const auto profile = build_profile(psi, grid, config.source.sigma);
    const double alpha = config.reg.alpha
                             ? *config.reg.alpha
                             : select_alpha(config.noise.eps.front(), config.regularization()).alpha;
    const double h0 = sandwich_threshold(psi);
    const auto sets = level_sets(profile, alpha, h0);

    CsvFile kernel(directory / "kernel.csv", kKernelHeader);
    for (std::size_t k = 0; k < profile.size(); ++k) {
        kernel.row(num(profile.nu[k]), num(profile.values[k]), int(sets.omega_mask[k]),
                   int(sets.pi_mask[k]));
    }
    kernel.close();

    const auto zeros = find_zeros(psi, nu_max);
    CsvFile zeros_csv(directory / "zeros.csv", kZerosHeader);
    json zeros_json = json::array();
    for (const auto& z : zeros) {
        zeros_csv.row(num(z.nu), z.confirmed ? 1 : 0);
        zeros_json.push_back({{"nu", z.nu}, {"confirmed", z.confirmed}});
    }
    zeros_csv.close();
    return {{"psi", psi.describe()},     {"nu_max", nu_max},
            {"alpha", alpha},            {"h0", h0},
            {"omega_size", sets.omega_count()}, {"pi_size", sets.pi_count()},
            {"psi_l1", profile.psi_l1},  {"zeros", zeros_json}};
}

json write_instability_dump(const ExperimentConfig& config, int n,
                            const std::filesystem::path& directory) {
    ensure_directory(directory);
    const auto grid = config.grid();
    const auto profile = build_profile(config.psi(), grid, config.source.sigma);
    const auto w = instability_sequence(n, profile, grid);
    CsvFile out(directory / "unstable.csv", kUnstableHeader);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        out.row(num(grid.node(j)), num(w.f[j]), num(w.h[j]));
    }
    out.close();
    return {{"n", n},
            {"f_norm_sq", w.f_norm_sq},
            {"h_norm_sq", w.h_norm_sq},
            {"ratio", w.ratio},
            {"radius", w.radius},
            {"set_size", w.set_size}};
}

}  // namespace bpsi
