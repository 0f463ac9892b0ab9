#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <optional>

#include "fliu/dataio.hpp"
#include "fliu/error.hpp"
#include "fliu/pipeline.hpp"
#include "fliu/risk.hpp"
#include "fliu/selection.hpp"

namespace py = pybind11;
using namespace fliu;

namespace {

using Design = std::shared_ptr<DesignBundle>;

PenaltyParams params_of(std::optional<double> lambda, std::optional<double> d, std::optional<double> alpha) {
    return {.lambda = lambda, .d = d, .alpha = alpha};
}

py::dict params_dict(const PenaltyParams& p) {
    py::dict out;
    out["lambda"] = p.lambda ? py::cast(*p.lambda) : py::none();
    out["d"] = p.d ? py::cast(*p.d) : py::none();
    out["alpha"] = p.alpha ? py::cast(*p.alpha) : py::none();
    return out;
}

py::object plug_in_dict(const std::optional<PlugIn>& p) {
    if (!p) return py::none();
    py::dict out;
    out["c1"] = p->c1;
    out["c2"] = p->c2;
    out["c3"] = p->c3;
    out["d_plug"] = p->d_plug;
    out["d_proj"] = p->d_proj;
    return out;
}

py::dict fit_dict(const EstimatorFit& f) {
    py::dict out;
    out["method"] = std::string(to_string(f.method));
    out["params"] = params_dict(f.params);
    out["coef"] = f.coef;
    out["fitted"] = f.fitted;
    out["residuals"] = f.residuals;
    out["effective_dof"] = f.effective_dof;
    return out;
}

FunctionalDataset make_dataset(std::vector<double> grid, std::vector<Matrix> curves, Vector response,
                               std::vector<std::string> labels) {
    FunctionalDataset data;
    data.grid = std::move(grid);
    data.curves = std::move(curves);
    data.response = std::move(response);
    data.labels = std::move(labels);
    data.validate();
    return data;
}

py::dict dataset_dict(const FunctionalDataset& d) {
    py::dict out;
    out["grid"] = d.grid;
    out["curves"] = d.curves;
    out["response"] = d.response;
    out["labels"] = d.labels;
    return out;
}

}  // namespace

PYBIND11_MODULE(_fliu, m) {
    m.doc() = "Functional Liu-type shrinkage for scalar-on-function regression";

    // Raised errors carry the library's error code name as `.code`.
    static py::handle error_type = py::exception<Error>(m, "Error", PyExc_RuntimeError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = py::reinterpret_borrow<py::object>(error_type)(e.what());
            inst.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(error_type.ptr(), inst.ptr());
        }
    });

    py::class_<DesignBundle, Design>(m, "Design")
        .def(py::init([](const Matrix& z, const Matrix& r) { return std::make_shared<DesignBundle>(make_bundle(z, r)); }),
             py::arg("z"), py::arg("penalty"), "Design from an n x m score matrix and an m x m penalty")
        .def_property_readonly("n", &DesignBundle::n)
        .def_property_readonly("m", &DesignBundle::m)
        .def_readonly("z", &DesignBundle::z)
        .def_readonly("z_aug", &DesignBundle::z_aug)
        .def_readonly("gram", &DesignBundle::gram)
        .def_readonly("penalty", &DesignBundle::r);

    m.def(
        "design_from_curves",
        [](std::vector<double> grid, std::vector<Matrix> curves, const std::string& basis, Eigen::Index size,
           std::optional<double> period, int order, std::optional<std::string> penalty) {
            const Eigen::Index n = curves.empty() ? 0 : curves.front().rows();
            FunctionalDataset data = make_dataset(std::move(grid), std::move(curves), Vector::Zero(n), {});
            BasisConfig bc;
            bc.kind = parse_basis_kind(basis);
            bc.size = size;
            bc.period = period;
            bc.order = order;
            if (penalty) bc.penalty = parse_penalty_mode(*penalty);
            return std::make_shared<DesignBundle>(build_design(data, make_bases(data, bc), penalty_for(bc)));
        },
        py::arg("grid"), py::arg("curves"), py::arg("basis") = "fourier", py::arg("size") = 11,
        py::arg("period") = py::none(), py::arg("order") = 4, py::arg("penalty") = py::none(),
        "Project sampled curves (one n x T array per predictor) onto a basis");

    m.def(
        "fit",
        [](const Design& d, const Vector& y, const std::string& method, std::optional<double> lambda,
           std::optional<double> dd, std::optional<double> alpha) {
            return fit_dict(fit(d, y, parse_method(method), params_of(lambda, dd, alpha)));
        },
        py::arg("design"), py::arg("y"), py::arg("method"), py::arg("lam") = py::none(), py::arg("d") = py::none(),
        py::arg("alpha") = py::none());

    m.def(
        "gcv",
        [](const Design& d, const Vector& y, const std::string& method, std::optional<double> lambda,
           std::optional<double> dd, std::optional<double> alpha) {
            return gcv(*d, y, parse_method(method), params_of(lambda, dd, alpha));
        },
        py::arg("design"), py::arg("y"), py::arg("method"), py::arg("lam") = py::none(), py::arg("d") = py::none(),
        py::arg("alpha") = py::none());

    m.def(
        "press",
        [](const Design& d, const Vector& y, const std::string& method, std::optional<double> lambda,
           std::optional<double> dd, std::optional<double> alpha) {
            return press(*d, y, parse_method(method), params_of(lambda, dd, alpha));
        },
        py::arg("design"), py::arg("y"), py::arg("method"), py::arg("lam") = py::none(), py::arg("d") = py::none(),
        py::arg("alpha") = py::none());

    m.def(
        "smoother_matrix",
        [](const Design& d, const std::string& method, std::optional<double> lambda, std::optional<double> dd,
           std::optional<double> alpha) {
            return smoother_matrix(*d, parse_method(method), params_of(lambda, dd, alpha));
        },
        py::arg("design"), py::arg("method"), py::arg("lam") = py::none(), py::arg("d") = py::none(),
        py::arg("alpha") = py::none());

    m.def(
        "tune",
        [](const Design& d, const Vector& y, const std::string& method, const std::string& criterion,
           std::optional<std::pair<double, double>> lambda_range, std::optional<std::pair<double, double>> d_range,
           std::optional<std::pair<double, double>> alpha_range) {
            TuningBounds b;
            if (lambda_range) std::tie(b.lambda_lo, b.lambda_hi) = *lambda_range;
            if (d_range) std::tie(b.d_lo, b.d_hi) = *d_range;
            if (alpha_range) std::tie(b.alpha_lo, b.alpha_hi) = *alpha_range;
            const TuningResult t = tune(*d, y, parse_method(method), parse_criterion(criterion), b);
            py::dict out;
            out["params"] = params_dict(t.best);
            out["score"] = t.score;
            out["coarse_params"] = params_dict(t.coarse_best);
            out["coarse_score"] = t.coarse_score;
            out["evaluations"] = t.evaluations;
            out["degenerate"] = t.degenerate;
            out["plug_in"] = plug_in_dict(t.plug_in);
            return out;
        },
        py::arg("design"), py::arg("y"), py::arg("method"), py::arg("criterion") = "gcv",
        py::arg("lambda_range") = py::none(), py::arg("d_range") = py::none(), py::arg("alpha_range") = py::none());

    m.def(
        "plug_in_d",
        [](const Design& d, const Vector& y, double lambda, double alpha, std::optional<double> sigma2) {
            return plug_in_dict(sigma2 ? plug_in_d(*d, y, lambda, alpha, *sigma2) : plug_in_d(d, y, lambda, alpha));
        },
        py::arg("design"), py::arg("y"), py::arg("lam"), py::arg("alpha"), py::arg("sigma2") = py::none());

    m.def(
        "degeneracy_check",
        [](const Design& d, const Vector& y, double lambda, double alpha, std::vector<double> d_grid) {
            const DegeneracyReport r = degeneracy_check(*d, y, lambda, alpha, d_grid);
            py::dict out;
            out["n"] = r.n;
            out["rank"] = r.rank;
            out["full_row_rank"] = r.full_row_rank;
            out["d_grid"] = r.d_grid;
            out["gcv"] = r.gcv;
            out["press"] = r.press;
            out["gcv_spread"] = r.gcv_spread;
            out["press_spread"] = r.press_spread;
            out["identity_error"] = r.identity_error;
            out["gcv_closed_form"] = r.gcv_closed_form;
            out["press_closed_form"] = r.press_closed_form;
            out["degenerate"] = r.degenerate;
            return out;
        },
        py::arg("design"), py::arg("y"), py::arg("lam"), py::arg("alpha"), py::arg("d_grid"));

    m.def(
        "mse_coefficients",
        [](const Matrix& s, const Matrix& q, const Vector& b, double sigma2) {
            const risk::RiskProfile p = risk::mse_coefficients(s, q, b, sigma2);
            py::dict out;
            out["c0"] = p.c0;
            out["c1"] = p.c1;
            out["c2"] = p.c2;
            out["c3"] = p.c3;
            out["d_opt"] = p.quadratic() > 0.0 ? py::cast(risk::d_opt(p)) : py::none();
            return out;
        },
        py::arg("gram"), py::arg("q"), py::arg("b"), py::arg("sigma2"));

    m.def(
        "load_dataset",
        [](const std::filesystem::path& curves, const std::filesystem::path& response, const std::string& layout) {
            return dataset_dict(dataio::load_dataset(curves, response, dataio::parse_layout(layout)));
        },
        py::arg("curves"), py::arg("response"), py::arg("layout") = "wide");

    m.def(
        "split_indices",
        [](Eigen::Index n, const std::string& spec, std::uint64_t seed) {
            const dataio::SplitIndices s = dataio::split_indices(n, dataio::parse_split(spec, seed));
            return std::make_pair(s.train, s.test);
        },
        py::arg("n"), py::arg("spec"), py::arg("seed") = 1);
}
