#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "bpsi/errors.hpp"
#include "bpsi/experiment.hpp"
#include "bpsi/forward.hpp"
#include "bpsi/kernel.hpp"
#include "bpsi/metrics.hpp"
#include "bpsi/perturb.hpp"
#include "bpsi/regularize.hpp"

namespace py = pybind11;
using namespace bpsi;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a) {
    if (a.ndim() != 1) throw ShapeError("expected a one-dimensional array");
    return {a.data(), a.data() + a.size()};
}

py::array_t<double> to_array(const std::vector<double>& v) {
    return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

// nlohmann::json <-> Python through the json module keeps the binding small.
py::object to_python(const nlohmann::json& doc) {
    return py::module_::import("json").attr("loads")(doc.dump());
}

nlohmann::json from_python(const py::object& obj) {
    const auto text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
    return nlohmann::json::parse(text);
}

NoiseSpec noise_spec(double eps, std::uint64_t seed, const std::string& target,
                     const std::string& model) {
    return {eps, seed, parse_noise_target(target), parse_noise_model(model)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spectral reconstruction of a space-dependent source from final-time data";

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
    py::register_exception<SymmetryError>(m, "SymmetryError", base.ptr());
    py::register_exception<SingularityError>(m, "SingularityError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<ConsistencyError>(m, "ConsistencyError", base.ptr());
    py::register_exception<RangeError>(m, "RangeError", base.ptr());
    py::register_exception<MetricError>(m, "MetricError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());
    py::register_exception<AccuracyError>(m, "AccuracyError", base.ptr());

    py::class_<SpatialGrid>(m, "SpatialGrid")
        .def(py::init<double, double, std::size_t>(), py::arg("left") = SpatialGrid::kDefaultLeft,
             py::arg("right") = SpatialGrid::kDefaultRight,
             py::arg("size") = SpatialGrid::kDefaultSize)
        .def_property_readonly("left", &SpatialGrid::left)
        .def_property_readonly("right", &SpatialGrid::right)
        .def_property_readonly("size", &SpatialGrid::size)
        .def_property_readonly("dx", &SpatialGrid::dx)
        .def_property_readonly("dz", &SpatialGrid::dz)
        .def_property_readonly("max_frequency", &SpatialGrid::max_frequency)
        .def("nodes", [](const SpatialGrid& g) { return to_array(g.nodes()); })
        .def("frequencies", [](const SpatialGrid& g) { return to_array(g.frequencies()); })
        .def("__repr__", [](const SpatialGrid& g) {
            return "SpatialGrid(" + std::to_string(g.left()) + ", " + std::to_string(g.right()) +
                   ", " + std::to_string(g.size()) + ")";
        });
    m.def("make_grid", &make_grid, py::arg("left"), py::arg("right"), py::arg("size"));

    py::class_<TemporalSource>(m, "TemporalSource")
        .def_static("constant", &TemporalSource::constant, py::arg("c"), py::arg("horizon") = 1.0)
        .def_static("affine", &TemporalSource::affine, py::arg("a"), py::arg("b"),
                    py::arg("horizon") = 1.0)
        .def_static("power_singular", &TemporalSource::power_singular, py::arg("theta"),
                    py::arg("b0"), py::arg("xi") = 0.0, py::arg("horizon") = 1.0)
        .def_static("sampled", &TemporalSource::sampled, py::arg("t"), py::arg("values"))
        .def_static("from_csv", &TemporalSource::from_csv, py::arg("path"))
        .def_property_readonly("horizon", &TemporalSource::horizon)
        .def_property_readonly("theta", &TemporalSource::theta)
        .def_property_readonly("p_T", &TemporalSource::p_T)
        .def("__call__", &TemporalSource::operator(), py::arg("t"))
        .def("__repr__", &TemporalSource::describe);
    m.def("l1_norm", &l1_norm, py::arg("psi"));
    m.def("l1_distance", &l1_distance, py::arg("psi"), py::arg("other"));

    py::class_<KernelProfile>(m, "KernelProfile")
        .def_property_readonly("nu", [](const KernelProfile& p) { return to_array(p.nu); })
        .def_property_readonly("values", [](const KernelProfile& p) { return to_array(p.values); })
        .def_readonly("sigma", &KernelProfile::sigma)
        .def_readonly("psi_l1", &KernelProfile::psi_l1)
        .def_readonly("grid", &KernelProfile::grid)
        .def("max_abs", &KernelProfile::max_abs);

    m.def("eval_kernel", &eval_kernel, py::arg("psi"), py::arg("nu"));
    m.def("build_profile", &build_profile, py::arg("psi"), py::arg("grid"), py::arg("sigma") = 1.0);
    m.def("find_zeros", [](const TemporalSource& psi, double nu_max) {
        py::list out;
        for (const auto& z : find_zeros(psi, nu_max)) out.append(py::make_tuple(z.nu, z.confirmed));
        return out;
    }, py::arg("psi"), py::arg("nu_max"));
    m.def("asymptotic_residual", &asymptotic_residual, py::arg("psi"), py::arg("x"));

    m.def("apply_forward", [](const Array& f, const KernelProfile& p, const SpatialGrid& g) {
        return to_array(apply_forward(to_vector(f), p, g));
    }, py::arg("f"), py::arg("profile"), py::arg("grid"));
    m.def("time_solution", [](const Array& f, const TemporalSource& psi, const SpatialGrid& g,
                              double sigma, double t) {
        return to_array(time_solution(to_vector(f), psi, g, sigma, t));
    }, py::arg("f"), py::arg("psi"), py::arg("grid"), py::arg("sigma"), py::arg("t"));

    m.def("perturb_data", [](const Array& h, double eps, std::uint64_t seed, const SpatialGrid& g,
                             const std::string& model) {
        return to_array(perturb_data(to_vector(h), noise_spec(eps, seed, "data_h", model), g));
    }, py::arg("h"), py::arg("epsilon"), py::arg("seed"), py::arg("grid"),
       py::arg("model") = "pointwise");
    m.def("perturb_source", [](const TemporalSource& psi, double eps, std::uint64_t seed) {
        const auto p = perturb_source(psi, noise_spec(eps, seed, "source_psi", "pointwise"));
        return py::make_tuple(p.psi, p.achieved_l1);
    }, py::arg("psi"), py::arg("epsilon"), py::arg("seed"));

    m.def("reconstruct", [](const Array& h, const KernelProfile& p, double alpha,
                            const SpatialGrid& g, const std::string& filter) {
        const auto rec = reconstruct(parse_filter(filter), to_vector(h), p, alpha, g);
        return py::make_tuple(to_array(rec.samples), rec.passband_size);
    }, py::arg("h"), py::arg("profile"), py::arg("alpha"), py::arg("grid"),
       py::arg("filter") = "truncation");
    m.def("select_alpha", [](double eps, double s, double sigma, double theta, double gamma,
                             double beta, double q) {
        RegularizationConfig cfg;
        cfg.s = s;
        cfg.sigma = sigma;
        cfg.theta = theta;
        cfg.gamma = gamma;
        cfg.beta = beta;
        cfg.q = q;
        return select_alpha(eps, cfg).alpha;
    }, py::arg("epsilon"), py::arg("s") = 0.0, py::arg("sigma") = 1.0, py::arg("theta") = 0.0,
       py::arg("gamma") = 2.0, py::arg("beta") = 1.0, py::arg("q") = 4.0);

    m.def("l2_error", [](const Array& a, const Array& b, double dx) {
        return l2_error(to_vector(a), to_vector(b), dx);
    }, py::arg("exact"), py::arg("rec"), py::arg("dx"));
    m.def("relative_error", [](const Array& a, const Array& b, double dx) {
        return relative_error(to_vector(a), to_vector(b), dx);
    }, py::arg("exact"), py::arg("rec"), py::arg("dx"));
    m.def("hs_norm", [](const Array& f, double s, const SpatialGrid& g) {
        return hs_norm(to_vector(f), s, g);
    }, py::arg("field"), py::arg("s"), py::arg("grid"));
    m.def("fit_rate", [](const Array& eps, const Array& err) {
        return fit_rate(to_vector(eps), to_vector(err));
    }, py::arg("eps"), py::arg("err"));
    m.def("instability_sequence", [](int n, const KernelProfile& p, const SpatialGrid& g) {
        const auto w = instability_sequence(n, p, g);
        py::dict out;
        out["f"] = to_array(w.f);
        out["h"] = to_array(w.h);
        out["f_norm_sq"] = w.f_norm_sq;
        out["h_norm_sq"] = w.h_norm_sq;
        out["ratio"] = w.ratio;
        return out;
    }, py::arg("n"), py::arg("profile"), py::arg("grid"));

    m.def("run_experiment", [](const py::object& config, const py::object& out_dir) {
        const auto cfg = ExperimentConfig::from_json(from_python(config));
        ExperimentResult result = [&] {
            py::gil_scoped_release release;
            return run_experiment(cfg);
        }();
        if (!out_dir.is_none()) write_outputs(result, out_dir.cast<std::filesystem::path>());
        return to_python(result.summary_json());
    }, py::arg("config"), py::arg("out_dir") = py::none(),
       "Runs the sweep for a config mapping; returns the report summary and optionally "
       "writes the CSV/JSON artifacts.");
}
