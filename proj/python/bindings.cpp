// Python bindings for the main operations: closed-form hedging errors,
// surfaces, first-passage quantities, iterated-operator bounds and the
// Monte Carlo oracles.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "timinghedge/density.hpp"
#include "timinghedge/hedging_errors.hpp"
#include "timinghedge/montecarlo.hpp"
#include "timinghedge/numerics.hpp"
#include "timinghedge/parametrix.hpp"
#include "timinghedge/timing_risk.hpp"

namespace py = pybind11;
using namespace timinghedge;

namespace {

BarrierContract make_contract(double barrier, double kprime, double maturity,
                              double tau) {
    return BarrierContract(barrier, kprime, maturity, tau);
}

GbmParams make_params(double r, double sigma) { return GbmParams(r, sigma); }

}  // namespace

PYBIND11_MODULE(_timinghedge, m) {
    m.doc() = "semi-static hedging of barrier options: timing risk, hedging "
              "errors, parametrix series";

    py::register_exception<UndefinedRatioError>(m, "UndefinedRatioError");

    py::class_<GbmParams>(m, "GbmParams")
        .def(py::init(&make_params), py::arg("r"), py::arg("sigma"))
        .def_readonly("r", &GbmParams::r)
        .def_readonly("sigma", &GbmParams::sigma)
        .def("mu", &GbmParams::mu);

    py::class_<BarrierContract>(m, "BarrierContract")
        .def(py::init(&make_contract), py::arg("barrier"), py::arg("hedge_strike"),
             py::arg("maturity"), py::arg("hit_time"))
        .def_readonly("barrier", &BarrierContract::barrier)
        .def_readonly("hedge_strike", &BarrierContract::hedge_strike)
        .def_readonly("maturity", &BarrierContract::maturity)
        .def_readonly("hit_time", &BarrierContract::hit_time)
        .def("log_barrier", &BarrierContract::log_barrier)
        .def("remaining", &BarrierContract::remaining);

    py::class_<McConfig>(m, "McConfig")
        .def(py::init<>())
        .def_readwrite("n_paths", &McConfig::n_paths)
        .def_readwrite("n_steps", &McConfig::n_steps)
        .def_readwrite("seed", &McConfig::seed)
        .def_readwrite("bridge", &McConfig::bridge)
        .def_readwrite("antithetic", &McConfig::antithetic)
        .def_readwrite("n_threads", &McConfig::n_threads);

    py::class_<McEstimate>(m, "McEstimate")
        .def_readonly("mean", &McEstimate::mean)
        .def_readonly("std_error", &McEstimate::std_error)
        .def_readonly("n_effective", &McEstimate::n_effective)
        .def("__repr__", [](const McEstimate& e) {
            std::ostringstream os;
            os << "McEstimate(mean=" << e.mean << ", std_error=" << e.std_error
               << ", n_effective=" << e.n_effective << ")";
            return os.str();
        });

    m.def("normal_cdf", &normal_cdf, py::arg("z"));
    m.def("he1", &he1, py::arg("contract"), py::arg("params"),
          py::arg("discounted") = false);
    m.def(
        "he1_components",
        [](const BarrierContract& c, const GbmParams& p) {
            const auto r = he1_components(c, p);
            return py::make_tuple(r.first, r.second);
        },
        py::arg("contract"), py::arg("params"));
    m.def(
        "he2",
        [](const BarrierContract& c, const GbmParams& p, std::size_t outer,
           std::size_t inner, double trunc, bool discounted) {
            const auto r = he2(c, p, He2Quadrature{outer, inner, trunc}, discounted);
            py::dict d;
            d["total"] = r.total;
            d["components"] = std::vector<double>(r.components.begin(),
                                                  r.components.end());
            return d;
        },
        py::arg("contract"), py::arg("params"), py::arg("outer_nodes") = 64,
        py::arg("inner_nodes") = 64, py::arg("trunc_std") = 8.0,
        py::arg("discounted") = false);
    m.def(
        "ratio_gamma",
        [](const BarrierContract& c, const GbmParams& p) {
            return ratio_gamma(c, p);
        },
        py::arg("contract"), py::arg("params"));
    m.def(
        "sweep_surface",
        [](const std::string& kind, const std::vector<double>& kprime_axis,
           const std::vector<double>& sigma_axis, double barrier, double r,
           double maturity, double tau) {
            SurfaceKind k;
            if (kind == "first")
                k = SurfaceKind::first;
            else if (kind == "second")
                k = SurfaceKind::second;
            else if (kind == "ratio")
                k = SurfaceKind::ratio;
            else
                throw std::invalid_argument("kind must be first|second|ratio");
            const auto s = sweep_surface(k, kprime_axis, sigma_axis,
                                         SweepFixed{barrier, r, maturity, tau});
            py::dict d;
            d["kprime"] = s.kprime_axis;
            d["sigma"] = s.sigma_axis;
            d["values"] = s.values;
            d["defined"] = std::vector<bool>(s.defined.begin(), s.defined.end());
            return d;
        },
        py::arg("kind"), py::arg("kprime_axis"), py::arg("sigma_axis"),
        py::arg("barrier") = 80.0, py::arg("r") = 0.03, py::arg("maturity") = 1.0,
        py::arg("tau") = 0.6);

    m.def(
        "first_passage_cdf",
        [](double start, double log_barrier, const GbmParams& p, double horizon,
           double s) {
            return first_passage_cdf(
                FirstPassageSpec(start, log_barrier, p, horizon), s);
        },
        py::arg("start"), py::arg("log_barrier"), py::arg("params"),
        py::arg("horizon"), py::arg("s"));
    m.def(
        "carr_picron_residual",
        [](double start, double log_barrier, const GbmParams& p, double horizon) {
            return carr_picron_residual(
                FirstPassageSpec(start, log_barrier, p, horizon));
        },
        py::arg("start"), py::arg("log_barrier"), py::arg("params"),
        py::arg("horizon"));

    m.def("he1_mc", &he1_mc, py::arg("contract"), py::arg("params"), py::arg("cfg"));
    m.def(
        "knockout_price_mc",
        [](const BarrierContract& c, const GbmParams& p, double x0,
           const McConfig& cfg) {
            return knockout_price_mc(
                c, p, PayoffSpec::call(c.hedge_strike, c.log_barrier()), x0, cfg);
        },
        py::arg("contract"), py::arg("params"), py::arg("x0"), py::arg("cfg"));
    m.def(
        "hedge_portfolio_mc",
        [](const BarrierContract& c, const GbmParams& p, double x0, int order,
           const McConfig& cfg) {
            return hedge_portfolio_mc(
                c, p, PayoffSpec::call(c.hedge_strike, c.log_barrier()), x0, order,
                cfg);
        },
        py::arg("contract"), py::arg("params"), py::arg("x0"), py::arg("order"),
        py::arg("cfg"));

    m.def(
        "series_bound",
        [](double c_q, double c_b, double f_inf, double horizon, int order) {
            return series_bound({c_q, c_b, f_inf, horizon, order});
        },
        py::arg("c_q"), py::arg("c_b"), py::arg("f_inf"), py::arg("horizon"),
        py::arg("order"));
    m.def("series_bound_cq_constant_model", &series_bound_cq_constant_model,
          py::arg("params"), py::arg("horizon"));
    m.def(
        "parametrix_identity_residual",
        [](const GbmParams& p, double t, double x, double y) {
            return parametrix_identity_residual(p, t, x, y, WeightFn::one());
        },
        py::arg("params"), py::arg("t"), py::arg("x"), py::arg("y"));
    m.def("s_op1_closed_form", &s_op1_closed_form, py::arg("contract"),
          py::arg("params"), py::arg("t"), py::arg("x"));

    m.def(
        "lamperti_transform",
        [](const std::function<double(double)>& sigma_fn, double lamperti_ref,
           double lo, double hi, double x) {
            DiffusionSpec1D spec(sigma_fn, [](double) { return 0.0; }, lamperti_ref,
                                 lo, hi);
            return lamperti_transform(spec, x);
        },
        py::arg("sigma_fn"), py::arg("lamperti_ref"), py::arg("lo"), py::arg("hi"),
        py::arg("x"));
}
