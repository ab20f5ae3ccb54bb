// Python bindings. States cross the boundary as 1-D complex numpy arrays;
// structured reports cross as JSON text and are turned into dicts on the
// Python side.
#include "szego/acceptance.hpp"
#include "szego/dynamics.hpp"
#include "szego/error.hpp"
#include "szego/hardy.hpp"
#include "szego/inner_composition.hpp"
#include "szego/io.hpp"
#include "szego/operators.hpp"
#include "szego/steady_states.hpp"
#include "szego/traveling_waves.hpp"
#include "szego/v3_reduced.hpp"

#include <nlohmann/json.hpp>
#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

namespace py = pybind11;
using namespace szego;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

HardyCoefficients from_array(const CArray& a)
{
    if (a.ndim() != 1) {
        throw SzegoError(ErrorCode::InvalidArgument, "coefficients must be a 1-D array");
    }
    const cplx* p = a.data();
    return HardyCoefficients(std::vector<cplx>(p, p + a.shape(0)));
}

CArray to_array(const HardyCoefficients& u)
{
    CArray out(static_cast<py::ssize_t>(u.trunc()));
    std::copy(u.coeffs().begin(), u.coeffs().end(), out.mutable_data());
    return out;
}

WaveFamily family_of(const std::string& f)
{
    if (f == "I") {
        return WaveFamily::I;
    }
    if (f == "II") {
        return WaveFamily::II;
    }
    throw SzegoError(ErrorCode::InvalidArgument, "family must be 'I' or 'II'");
}

template <class T>
std::string dump(const T& v)
{
    return nlohmann::json(v).dump();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Quadratic Szego equation: Hardy-space numerics";

    // Raised for every library error; `code` holds the error name, e.g. "TRUNC_TOO_SMALL".
    static PyObject* error = PyErr_NewException("szego._core.SzegoError", PyExc_RuntimeError, nullptr);
    m.attr("SzegoError") = py::handle(error);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const SzegoError& e) {
            py::object exc = py::reinterpret_borrow<py::object>(error)(std::string(e.what()));
            py::setattr(exc, "code", py::str(std::string(to_string(e.code()))));
            PyErr_SetObject(error, exc.ptr());
        }
    });

    // hardy_core
    m.def("conserved", [](const CArray& u) {
        const auto c = conserved(from_array(u));
        return py::dict(py::arg("Q") = c.Q, py::arg("M") = c.M, py::arg("E") = c.E, py::arg("J") = c.J);
    }, py::arg("u"), "Q, M, E and J of a state.");
    m.def("functional_j", [](const CArray& u) { return functional_j(from_array(u)); }, py::arg("u"));
    m.def("rhs", [](const CArray& u) { return to_array(rhs(from_array(u))); }, py::arg("u"),
          "-i (2 J Pi(|u|^2) + conj(J) u^2).");
    m.def("evaluate", [](const CArray& u, cplx z) { return evaluate(from_array(u), z); }, py::arg("u"), py::arg("z"));

    // dynamics
    m.def("integrate", [](const CArray& u0, double dt, double t_final, std::size_t trunc, std::size_t stride,
                          bool monitor_spectrum, std::size_t spectrum_block) {
        SimulationConfig cfg;
        cfg.dt = dt;
        cfg.t_final = t_final;
        cfg.trunc = trunc == 0 ? static_cast<std::size_t>(u0.shape(0)) : trunc;
        cfg.monitor_stride = stride;
        cfg.monitor_spectrum = monitor_spectrum;
        cfg.spectrum_block = spectrum_block;
        TrajectoryRecord traj;
        {
            py::gil_scoped_release release;
            traj = integrate(from_array(u0), cfg);
        }
        py::array_t<cplx> states({traj.states.size(), cfg.trunc});
        auto s = states.mutable_unchecked<2>();
        std::vector<double> q;
        std::vector<double> mm;
        std::vector<double> e;
        for (std::size_t i = 0; i < traj.states.size(); ++i) {
            for (std::size_t k = 0; k < cfg.trunc; ++k) {
                s(i, k) = traj.states[i][k];
            }
            q.push_back(traj.invariants[i].Q);
            mm.push_back(traj.invariants[i].M);
            e.push_back(traj.invariants[i].E);
        }
        py::dict out;
        out["times"] = traj.times;
        out["states"] = states;
        out["Q"] = q;
        out["M"] = mm;
        out["E"] = e;
        out["k2_spectra"] = traj.k2_spectra;
        out["drift"] = py::dict(py::arg("Q") = traj.drift.Q, py::arg("M") = traj.drift.M,
                                py::arg("E") = traj.drift.E);
        out["steps"] = traj.steps;
        return out;
    }, py::arg("u0"), py::arg("dt") = 1e-3, py::arg("t_final") = 1.0, py::arg("trunc") = 0,
       py::arg("stride") = 100, py::arg("monitor_spectrum") = false, py::arg("spectrum_block") = 0);

    // operators
    m.def("h2_eigenvalues", [](const CArray& u, std::size_t block) { return h2_eigenvalues(from_array(u), block); },
          py::arg("u"), py::arg("block") = 0);
    m.def("k2_eigenvalues", [](const CArray& u, std::size_t block) { return k2_eigenvalues(from_array(u), block); },
          py::arg("u"), py::arg("block") = 0);
    m.def("_spectral_report", [](const CArray& u, double tol) { return dump(spectral_report(from_array(u), tol)); },
          py::arg("u"), py::arg("tol") = kRankTolerance);
    m.def("_verify_lax", [](const CArray& u, std::size_t block) { return dump(verify_lax(from_array(u), block)); },
          py::arg("u"), py::arg("block") = 64);
    m.def("_verify_au_minus_d", [](const CArray& u, double varpi, double tol) {
        return dump(verify_au_minus_d(from_array(u), varpi, tol));
    }, py::arg("u"), py::arg("varpi"), py::arg("tol") = 1e-8);

    // traveling_waves
    py::class_<TravelingWaveSpec>(m, "TravelingWaveSpec")
        .def(py::init([](const std::string& family, cplx lambda, cplx p, std::size_t n) {
                 return TravelingWaveSpec(family_of(family), lambda, p, n);
             }),
             py::arg("family"), py::arg("lam"), py::arg("p"), py::arg("n") = 1)
        .def_property_readonly("family", [](const TravelingWaveSpec& s) {
            return s.family() == WaveFamily::I ? "I" : "II";
        })
        .def_property_readonly("lam", &TravelingWaveSpec::lambda)
        .def_property_readonly("p", &TravelingWaveSpec::p)
        .def_property_readonly("n", &TravelingWaveSpec::n)
        .def_property_readonly("omega", &TravelingWaveSpec::omega)
        .def_property_readonly("c", &TravelingWaveSpec::c)
        .def("__repr__", [](const TravelingWaveSpec& s) { return "TravelingWaveSpec(" + dump(s) + ")"; });
    m.def("build_profile", [](const TravelingWaveSpec& s, std::size_t trunc) { return to_array(build_profile(s, trunc)); },
          py::arg("spec"), py::arg("trunc"));
    m.def("residual_traveling", [](const CArray& v0, double omega, double c) {
        return residual_traveling(from_array(v0), omega, c);
    }, py::arg("v0"), py::arg("omega"), py::arg("c"));
    m.def("standing_wave_arc", [](double theta, const std::vector<std::pair<double, double>>& arcs, std::size_t trunc) {
        std::vector<Arc> a;
        for (const auto& [b, e] : arcs) {
            a.push_back({b, e});
        }
        return to_array(standing_wave_arc(theta, a, trunc));
    }, py::arg("theta"), py::arg("arcs"), py::arg("trunc"));
    m.def("verify_standing", [](const CArray& u, std::size_t modes) { return verify_standing(from_array(u), modes); },
          py::arg("u"), py::arg("modes"));

    // v3_reduced
    m.def("v3_embed", [](cplx b, cplx c, cplx p, std::size_t trunc) { return to_array(embed({b, c, p}, trunc)); },
          py::arg("b"), py::arg("c"), py::arg("p"), py::arg("trunc"));
    m.def("v3_rhs", [](cplx b, cplx c, cplx p) {
        const auto d = v3_rhs({b, c, p});
        return py::make_tuple(d.b, d.c, d.p);
    }, py::arg("b"), py::arg("c"), py::arg("p"));
    m.def("v3_derive", [](cplx b, cplx c, cplx p) {
        const auto d = derive({b, c, p});
        return py::dict(py::arg("Q") = d.Q, py::arg("M") = d.M, py::arg("J") = d.J, py::arg("x") = d.x,
                        py::arg("psi") = d.psi, py::arg("Ecal") = d.Ecal, py::arg("dxdt") = d.dxdt);
    }, py::arg("b"), py::arg("c"), py::arg("p"));
    m.def("_instability_probe", [](double r, double gamma, double dt, double t_final) {
        InstabilityConfig cfg;
        cfg.r = r;
        cfg.gamma = gamma;
        cfg.dt = dt;
        cfg.t_final = t_final;
        py::gil_scoped_release release;
        return dump(instability_probe(cfg));
    }, py::arg("r") = 0.25, py::arg("gamma") = 1e-2, py::arg("dt") = 1e-4, py::arg("t_final") = 50.0);

    // steady_states
    m.def("build_steady", [](double lambda, double a, double b_angle, double theta, std::size_t trunc) {
        return to_array(build_steady({lambda, a, b_angle, theta}, trunc));
    }, py::arg("lam") = 1.0, py::arg("a") = 0.0, py::arg("b_angle") = 0.0, py::arg("theta") = 0.0,
       py::arg("trunc") = 512);
    m.def("is_steady", [](const CArray& u, double tol) { return is_steady(from_array(u), tol); }, py::arg("u"),
          py::arg("tol"));
    m.def("_steady_grid", [](std::size_t n) { return dump(steady_grid(n, {})); }, py::arg("n") = 50);

    // inner_composition
    m.def("compose_zN", [](const CArray& u, std::size_t n) { return to_array(compose_zN(from_array(u), n)); },
          py::arg("u"), py::arg("n"));
    m.def("verify_flow_commutation", [](const CArray& u0, std::size_t n, double dt, double t_final) {
        SimulationConfig cfg;
        cfg.dt = dt;
        cfg.t_final = t_final;
        cfg.trunc = static_cast<std::size_t>(u0.shape(0));
        cfg.monitor_spectrum = false;
        return verify_flow_commutation(from_array(u0), n, cfg);
    }, py::arg("u0"), py::arg("n"), py::arg("dt") = 1e-3, py::arg("t_final") = 1.0);

    // sweeps
    m.def("_gn_sweep", [](std::size_t samples, std::size_t equality, std::uint64_t seed, std::size_t max_trunc) {
        return dump(gn_sweep(samples, equality, seed, max_trunc));
    }, py::arg("samples") = 10000, py::arg("equality") = 100, py::arg("seed") = 42, py::arg("max_trunc") = 32);
    m.def("_certify", [](bool quick, std::uint64_t seed) {
        AcceptanceOptions opts;
        opts.quick = quick;
        opts.seed = seed;
        py::gil_scoped_release release;
        return dump(run_acceptance(opts));
    }, py::arg("quick") = true, py::arg("seed") = 42);
}
