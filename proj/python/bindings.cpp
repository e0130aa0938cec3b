#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "entrev/cli.hpp"
#include "entrev/mc.hpp"
#include "entrev/nla.hpp"
#include "entrev/optimize.hpp"

namespace py = pybind11;
using namespace entrev;

namespace {

CMatrix matrix_from_numpy(const py::array_t<cplx>& arr) {
    const auto buf = arr.request();
    if (buf.ndim != 2 || buf.shape[0] != buf.shape[1]) {
        throw ArgumentError("expected a square 2-D complex array");
    }
    const int d = static_cast<int>(buf.shape[0]);
    CMatrix m(d);
    const auto view = arr.unchecked<2>();
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m.at(i, j) = view(i, j);
    return m;
}

py::array_t<cplx> matrix_to_numpy(const CMatrix& m) {
    py::array_t<cplx> arr({m.dim, m.dim});
    auto view = arr.mutable_unchecked<2>();
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j) view(i, j) = m.at(i, j);
    return arr;
}

DensityMatrix density_from_numpy(const py::array_t<cplx>& arr, bool heralded) {
    return DensityMatrix{matrix_from_numpy(arr),
                         heralded ? NormKind::Heralded : NormKind::Normalized};
}

}  // namespace

PYBIND11_MODULE(_entrev, m) {
    m.doc() = "Entanglement recovery in noisy entanglement swapping";

    py::enum_<BsmOutcome>(m, "BsmOutcome")
        .value("PHI_PLUS", BsmOutcome::PhiPlus)
        .value("PHI_MINUS", BsmOutcome::PhiMinus)
        .value("PSI_PLUS", BsmOutcome::PsiPlus)
        .value("PSI_MINUS", BsmOutcome::PsiMinus);

    py::enum_<RepeaterModel>(m, "RepeaterModel")
        .value("TWO_WAY", RepeaterModel::TwoWay)
        .value("ONE_WAY", RepeaterModel::OneWay);

    py::enum_<Scenario>(m, "Scenario")
        .value("SINGLE_PAIR", Scenario::SinglePair)
        .value("TWO_WAY", Scenario::TwoWay)
        .value("ONE_WAY", Scenario::OneWay);

    py::enum_<OutcomePolicy>(m, "OutcomePolicy")
        .value("PHI_ONLY", OutcomePolicy::PhiOnly)
        .value("PSI_ONLY", OutcomePolicy::PsiOnly)
        .value("KEEP_ALL", OutcomePolicy::KeepAll);

    m.def("tensor",
          [](const py::array_t<cplx>& x, const py::array_t<cplx>& y) {
              return matrix_to_numpy(tensor(matrix_from_numpy(x), matrix_from_numpy(y)));
          },
          py::arg("x"), py::arg("y"));

    m.def("partial_trace",
          [](const py::array_t<cplx>& rho, const std::vector<int>& keep, bool heralded) {
              return matrix_to_numpy(
                  partial_trace(density_from_numpy(rho, heralded), keep).mat);
          },
          py::arg("rho"), py::arg("keep"), py::arg("heralded") = false);

    m.def("hermitian_eigenvalues", [](const py::array_t<cplx>& x) {
        return hermitian_eigenvalues(matrix_from_numpy(x));
    });

    m.def("amplitude_damping_ops", [](double d) {
        std::vector<py::array_t<cplx>> out;
        for (const CMatrix& k : amplitude_damping(DampingStrength(d)).ops)
            out.push_back(matrix_to_numpy(k));
        return out;
    });

    m.def("reversal_ops", [](double r) {
        std::vector<py::array_t<cplx>> out;
        for (const CMatrix& k : reversal(ReversingStrength(r)).ops)
            out.push_back(matrix_to_numpy(k));
        return out;
    });

    m.def("apply_amplitude_damping",
          [](const py::array_t<cplx>& rho, double d, int target) {
              return matrix_to_numpy(apply_channel(density_from_numpy(rho, false),
                                                   amplitude_damping(DampingStrength(d)),
                                                   target)
                                         .mat);
          },
          py::arg("rho"), py::arg("damping"), py::arg("target"));

    m.def("apply_reversal_success",
          [](const py::array_t<cplx>& rho, double r, int target) {
              const HeraldedResult h = apply_heralded(density_from_numpy(rho, false),
                                                      reversal(ReversingStrength(r)), 0,
                                                      target);
              return py::make_tuple(matrix_to_numpy(h.state.mat), h.probability);
          },
          py::arg("rho"), py::arg("reversing"), py::arg("target"));

    m.def("concurrence", [](const py::array_t<cplx>& rho) {
        return concurrence(density_from_numpy(rho, false)).value;
    });

    m.def("concurrence_xstate", [](const py::array_t<cplx>& rho) {
        return concurrence_xstate(density_from_numpy(rho, false)).value;
    });

    m.def("bell_fidelity", [](const py::array_t<cplx>& rho, BsmOutcome target) {
        return bell_fidelity(density_from_numpy(rho, false), target).value;
    });

    py::class_<SwapResult>(m, "SwapResult")
        .def_readonly("outcome", &SwapResult::outcome)
        .def_readonly("branch_prob", &SwapResult::branch_prob)
        .def_readonly("reversal_prob", &SwapResult::reversal_prob)
        .def_property_readonly("state",
                               [](const SwapResult& r) { return matrix_to_numpy(r.state.mat); });

    m.def("swap_numeric",
          [](cplx a1, cplx b1, cplx a2, cplx b2, RepeaterModel model, double d, double r,
             BsmOutcome outcome) {
              return swap_numeric(PairAmplitudes(a1, b1), PairAmplitudes(a2, b2), model,
                                  DampingStrength(d), DampingStrength(d),
                                  ReversingStrength(r), ReversingStrength(r), outcome);
          },
          py::arg("a1"), py::arg("b1"), py::arg("a2"), py::arg("b2"), py::arg("model"),
          py::arg("damping"), py::arg("reversing"), py::arg("outcome"));

    m.def("swap_closed",
          [](cplx a1, cplx b1, cplx a2, cplx b2, RepeaterModel model, double d, double r,
             BsmOutcome outcome) {
              return swap_closed(PairAmplitudes(a1, b1), PairAmplitudes(a2, b2), model,
                                 DampingStrength(d), ReversingStrength(r), outcome);
          },
          py::arg("a1"), py::arg("b1"), py::arg("a2"), py::arg("b2"), py::arg("model"),
          py::arg("damping"), py::arg("reversing"), py::arg("outcome"));

    py::class_<SinglePairOptimum>(m, "SinglePairOptimum")
        .def_readonly("r_opt", &SinglePairOptimum::r_opt)
        .def_readonly("c_max", &SinglePairOptimum::c_max)
        .def_readonly("p_opt", &SinglePairOptimum::p_opt);
    m.def("optimal_r_single", &optimal_r_single, py::arg("damping"));
    m.def("fidelity_optimal_r", &fidelity_optimal_r, py::arg("damping"));

    py::class_<RepeaterOptimum>(m, "RepeaterOptimum")
        .def_readonly("r_opt", &RepeaterOptimum::r_opt)
        .def_readonly("c_max", &RepeaterOptimum::c_max)
        .def_readonly("p_opt", &RepeaterOptimum::p_opt)
        .def_readonly("b_opt", &RepeaterOptimum::b_opt)
        .def_readonly("q_opt", &RepeaterOptimum::q_opt);
    m.def("optimal_r_twoway_phi", &optimal_r_twoway_phi, py::arg("damping"));
    m.def("optimal_r_oneway_phi", &optimal_r_oneway_phi, py::arg("damping"));

    py::class_<RecoveryReport>(m, "RecoveryReport")
        .def_readonly("model", &RecoveryReport::model)
        .def_readonly("policy", &RecoveryReport::policy)
        .def_readonly("damping", &RecoveryReport::damping)
        .def_readonly("reversing", &RecoveryReport::reversing)
        .def_readonly("concurrence", &RecoveryReport::concurrence)
        .def_readonly("reversal_success_prob", &RecoveryReport::reversal_success_prob)
        .def_readonly("branch_prob", &RecoveryReport::branch_prob)
        .def_readonly("bell_pair_cost", &RecoveryReport::bell_pair_cost);
    m.def("oneway_psi_report", &oneway_psi_report, py::arg("damping"), py::arg("reversing"));
    m.def("recovery_report",
          [](Scenario model, OutcomePolicy policy, double d, std::optional<double> r) {
              return recovery_report(model, policy, d, r);
          },
          py::arg("model"), py::arg("policy"), py::arg("damping"),
          py::arg("reversing") = std::nullopt);
    m.def("unrecovered_concurrence", &unrecovered_concurrence, py::arg("model"),
          py::arg("policy"), py::arg("damping"));

    m.def("maximize_concurrence_numeric",
          [](const std::function<double(double)>& curve) {
              const MaximumPoint p = maximize_concurrence_numeric(curve);
              return py::make_tuple(p.r_star, p.c_star);
          });

    m.def("reversing_strength_from_eta",
          [](double eta) { return reversing_strength_from_eta(eta).r; });
    m.def("scissors_truncate", [](cplx c0, cplx c1, double eta) {
        const ScissorsResult r = scissors_truncate(c0, c1, eta);
        return py::make_tuple(r.out0, r.out1, r.herald_prob);
    });
    m.def("loss_as_damping", [](double rate) { return loss_as_damping(rate).d; });

    py::class_<McStats>(m, "McStats")
        .def_readonly("trials", &McStats::trials)
        .def_readonly("pair_successes", &McStats::pair_successes)
        .def("count", [](const McStats& s, bool success, BsmOutcome o) {
            return s.counts[success ? 1 : 0][static_cast<int>(o)];
        })
        .def("pair_success_freq", &McStats::pair_success_freq)
        .def("outcome_freq_given_success", &McStats::outcome_freq_given_success)
        .def("empirical_cost", &McStats::empirical_cost);

    m.def("run_trajectories",
          [](RepeaterModel model, double d, double r, std::uint64_t trials,
             std::uint64_t seed, int shards) {
              McConfig cfg;
              cfg.model = model;
              cfg.damping = d;
              cfg.reversing = r;
              cfg.trials = trials;
              cfg.seed = seed;
              cfg.shards = shards;
              return run_trajectories(cfg);
          },
          py::arg("model"), py::arg("damping"), py::arg("reversing"), py::arg("trials"),
          py::arg("seed") = 0, py::arg("shards") = 1);

    m.def("sweep_csv", [](const std::string& model, const std::string& policy,
                          double d_start, double d_stop, double d_step,
                          const std::string& reversing) {
        std::vector<std::string> args = {"sweep", "--model", model, "--policy", policy,
                                         "--damping-range",
                                         cli::format_number(d_start) + ":" +
                                             cli::format_number(d_stop) + ":" +
                                             cli::format_number(d_step),
                                         "--reversing", reversing};
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        if (code != 0) throw ArgumentError(err.str());
        return out.str();
    });
}
