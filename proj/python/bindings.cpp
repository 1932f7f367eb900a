#include "skbif/dynamics.hpp"
#include "skbif/error.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace skbif;

namespace {

std::vector<double> to_list(const HPoint& x)
{
    const Vec& v = x.vec();
    return {v.data(), v.data() + v.size()};
}

py::dict report_dict(const MinimalModelReport& r)
{
    py::dict d;
    d["k"] = r.k;
    d["eta"] = r.eta;
    d["eta0"] = r.eta0;
    d["lambda_min"] = r.lambda_min;
    d["lambda_max"] = r.lambda_max;
    d["family"] = r.family;
    d["crossing"] = r.crossings;
    d["folds"] = r.folds;
    d["expected_crossing"] = r.expected_crossings;
    d["expected_folds"] = r.expected_folds;
    d["crossing_index"] = r.crossing_index;
    d["max_fold_rel_error"] = r.max_fold_rel_error;
    d["pitchfork_legs_crossing"] = r.pitchfork_legs_crossing;
    d["pitchfork_legs_fold"] = r.pitchfork_legs_fold;
    d["notes"] = r.notes;
    d["numerical_failure"] = r.numerical_failure;
    d["pass"] = r.pass;
    return d;
}

} // namespace

PYBIND11_MODULE(_skbif, m)
{
    m.doc() = "S_k-equivariant bifurcation and forced symmetry breaking toolkit";

    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

    m.def("eps", [](int k, int p) { return to_list(eps(Dim(k), p)); }, py::arg("k"), py::arg("p"));
    m.def("axis_count", [](int k) { return enumerate_axes(Dim(k)).size(); }, py::arg("k"));
    m.def("gamma_closed", &gamma_closed, py::arg("k"), py::arg("p"), py::arg("eta"));
    m.def("chi", &chi, py::arg("k"), py::arg("p"));
    m.def("predicted_counts", [](int k) {
        const auto c = predicted_counts(k);
        return py::make_tuple(c.crossings, c.folds);
    }, py::arg("k"));
    m.def("staircase_count", &staircase_count, py::arg("k"), py::arg("eta"), py::arg("lam"));
    m.def("decompose_alpha", &decompose_alpha, py::arg("k"));
    m.def("planar_zeros", [](int k, int p, double eta, double lam, bool cubic) {
        std::vector<py::tuple> out;
        for (const auto& z : planar_zeros(planar_system(k, p, eta, cubic), lam)) {
            out.push_back(py::make_tuple(z.u, z.v, z.index));
        }
        return out;
    }, py::arg("k"), py::arg("p"), py::arg("eta"), py::arg("lam"), py::arg("cubic") = false);
    m.def("fold_lambdas", [](int k, int p, double eta, double lo, double hi, bool cubic) {
        std::vector<double> out;
        for (const auto& f : fold_detect(planar_system(k, p, eta, cubic), lo, hi)) {
            out.push_back(f.lambda_star);
        }
        return out;
    }, py::arg("k"), py::arg("p"), py::arg("eta"), py::arg("lo"), py::arg("hi"), py::arg("cubic") = false);
    m.def("equilibrium_count", [](int k, double eta, double lam) {
        return total_count(enumerate_equilibria(k, eta, lam));
    }, py::arg("k"), py::arg("eta"), py::arg("lam"));
    m.def("poincare_hopf", &poincare_hopf, py::arg("k"), py::arg("eta"), py::arg("lam"));
    m.def("verify_minimal_model", [](int k, double eta, std::optional<double> eta0) {
        VerifyConfig c;
        c.k = k;
        c.eta = eta;
        c.eta0 = eta0;
        return report_dict(verify_minimal_model(c));
    }, py::arg("k"), py::arg("eta"), py::arg("eta0") = py::none());
    m.def("connection_check", [](int k, int p, double lam) {
        const auto r = connection_check(k, p, lam);
        py::dict d;
        std::vector<py::tuple> conns;
        for (const auto& c : r.connections) {
            conns.push_back(py::make_tuple(c.from, c.to, c.found));
        }
        d["connections"] = conns;
        d["pass"] = r.pass;
        return d;
    }, py::arg("k"), py::arg("p"), py::arg("lam"));
    m.def("fell_index_check", &fell_index_check, py::arg("k"), py::arg("lam"));
}
