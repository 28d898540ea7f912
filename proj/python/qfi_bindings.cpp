#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qfi/experiment.hpp"

namespace py = pybind11;
using namespace qfi;

namespace {

py::dict measure_dict(const SpectralMeasure& m) {
    py::dict d;
    d["lam"] = m.lambda;
    d["weight"] = m.weight;
    return d;
}

SpectralMeasure measure_from(const RealVector& lam, const RealVector& weight) {
    if (lam.size() != weight.size())
        throw DimensionMismatch("measure: lam and weight lengths differ");
    SpectralMeasure m;
    m.lambda = lam;
    m.weight = weight;
    return m;
}

py::dict classification_dict(const RegimeClassification& c) {
    py::dict d;
    if (const auto* g = std::get_if<GappedRegime>(&c)) {
        d["kind"] = "gapped";
        d["lambda_min"] = g->lambda_min;
        d["lambda_max"] = g->lambda_max;
        d["gamma"] = g->gamma;
    } else {
        const auto& he = std::get<HardEdgeRegime>(c);
        d["kind"] = "hard-edge";
        d["alpha_hat"] = he.alpha_hat;
        d["fit_window"] = py::make_tuple(he.fit_window.first, he.fit_window.second);
        d["fit_residual"] = he.fit_residual;
    }
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Krylov-subspace quantum Fisher information (C++ core)";

    py::register_exception<Error>(m, "QfiError");

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def_property_readonly("dim", &DensityMatrix::dim)
        .def_readonly("matrix", &DensityMatrix::matrix)
        .def_readonly("eigenvalues", &DensityMatrix::eigenvalues)
        .def_readonly("eigenvectors", &DensityMatrix::eigenvectors);

    py::class_<WeightedSpace>(m, "WeightedSpace")
        .def_property_readonly("dim", &WeightedSpace::dim)
        .def_readonly("rho", &WeightedSpace::rho)
        .def_readonly("weights", &WeightedSpace::weights);

    m.def("validate_density_matrix", &validate_density_matrix,
          py::arg("raw"), py::arg("rank_tol") = 1e-12);
    m.def("build_weighted_space", &build_weighted_space, py::arg("rho"));
    m.def("random_density_matrix", &random_density_matrix,
          py::arg("dim"), py::arg("rng_seed"), py::arg("rank_tol") = 1e-12);
    m.def("ising_hamiltonian",
          [](int length, double j, double g, double h, int max_dim) {
              return ising_hamiltonian({length, j, g, h}, max_dim).matrix;
          },
          py::arg("length"), py::arg("J") = 1.0, py::arg("g") = 0.0, py::arg("h") = 0.0,
          py::arg("max_dim") = kDefaultMaxHilbertDim);

    m.def("exact_qfi",
          [](const WeightedSpace& ctx, const ComplexMatrix& h) {
              return exact_qfi(ctx, make_hermitian_operator(h));
          },
          py::arg("space"), py::arg("hamiltonian"));
    m.def("exact_sld",
          [](const WeightedSpace& ctx, const ComplexMatrix& h) {
              return exact_sld(ctx, make_hermitian_operator(h)).matrix;
          },
          py::arg("space"), py::arg("hamiltonian"),
          "SLD in the rho eigenbasis");

    // Full pipeline: seed -> Lanczos -> coefficients -> error analysis.
    m.def("analyze",
          [](const ComplexMatrix& rho_raw, const ComplexMatrix& h_raw, int max_n) {
              const WeightedSpace ctx = build_weighted_space(validate_density_matrix(rho_raw));
              const HermitianOperator h = make_hermitian_operator(h_raw);
              const Seed seed = unitary_seed(ctx, h);
              const KrylovResult kres = run_lanczos(ctx, seed.op, max_n);
              py::dict out;
              out["f_exact"] = exact_qfi(ctx, h);
              out["seed_norm"] = kres.seed_norm;
              out["a"] = kres.tridiag.a;
              out["b"] = kres.tridiag.b;
              out["d0"] = kres.d0 ? py::cast(*kres.d0) : py::none();
              out["fn_galerkin"] = fn_series(kres.tridiag, kres.seed_norm);
              if (kres.d0) {
                  const RealVector ell = krylov_coefficients(kres);
                  const QfiReport rep =
                      error_report(coefficient_partial_sums(ell), ell, exact_qfi(ctx, h));
                  out["ell"] = rep.ell;
                  out["p"] = rep.p;
                  out["depth"] = rep.depth;
                  out["rel_error"] = rep.rel_error;
              }
              const LiouvilleVector v0{seed.op.matrix / seed.norm, true};
              out["measure"] = measure_dict(spectral_measure(ctx, v0));
              return out;
          },
          py::arg("rho"), py::arg("hamiltonian"), py::arg("max_n") = 200);

    m.def("spectral_measure",
          [](const WeightedSpace& ctx, const ComplexMatrix& v0) {
              return measure_dict(spectral_measure(ctx, LiouvilleVector{v0, false}));
          },
          py::arg("space"), py::arg("v0"));
    m.def("classify_measure",
          [](const RealVector& lam, const RealVector& weight, double gap_threshold,
             double fit_decades) {
              ClassifyOptions opts;
              opts.gap_threshold = gap_threshold;
              opts.fit_decades = fit_decades;
              return classification_dict(classify_measure(measure_from(lam, weight), opts));
          },
          py::arg("lam"), py::arg("weight"), py::arg("gap_threshold") = 1e-3,
          py::arg("fit_decades") = 1.5);

    m.def("make_hard_edge_measure",
          [](double alpha, int atoms, double lambda_max, double bottom_cutoff) {
              return measure_dict(make_hard_edge_measure(alpha, atoms, lambda_max, bottom_cutoff));
          },
          py::arg("alpha"), py::arg("atoms"), py::arg("lambda_max") = 1.0,
          py::arg("bottom_cutoff") = 1e-8);
    m.def("make_gapped_measure",
          [](double lambda_min, double lambda_max, int atoms) {
              return measure_dict(make_gapped_measure(lambda_min, lambda_max, atoms));
          },
          py::arg("lambda_min"), py::arg("lambda_max"), py::arg("atoms"));

    m.def("coefficient_tail",
          [](const RealVector& lam, const RealVector& weight, int n_max) {
              const CoefficientTail t = coefficient_tail(measure_from(lam, weight), n_max);
              py::dict d;
              d["ell"] = t.ell;
              d["rel_error"] = t.rel_error;
              d["f"] = t.f;
              return d;
          },
          py::arg("lam"), py::arg("weight"), py::arg("n_max"));
    m.def("stieltjes_lanczos",
          [](const RealVector& lam, const RealVector& weight, int n_max) {
              const StieltjesResult st = stieltjes_lanczos(measure_from(lam, weight), n_max);
              py::dict d;
              d["a"] = st.tridiag.a;
              d["b"] = st.tridiag.b;
              d["poly_values"] = st.poly_values;
              return d;
          },
          py::arg("lam"), py::arg("weight"), py::arg("n_max"));
    m.def("fit_decay",
          [](const RealVector& series, const std::string& model, int n_lo, int n_hi) {
              const DecayFit fit = fit_decay(
                  series, model == "exponential" ? DecayModel::exponential : DecayModel::algebraic,
                  n_lo, n_hi);
              py::dict d;
              d["model"] = model;
              d["value"] = fit.value;
              d["window"] = py::make_tuple(fit.n_lo, fit.n_hi);
              d["residual"] = fit.residual;
              return d;
          },
          py::arg("series"), py::arg("model"), py::arg("n_lo"), py::arg("n_hi"));
    m.def("gauss_quadrature",
          [](const RealVector& a, const RealVector& b) {
              TridiagonalMatrix t;
              t.a = a;
              t.b = b;
              const QuadratureRule rule = gauss_quadrature(t);
              return py::make_tuple(rule.nodes, rule.weights);
          },
          py::arg("a"), py::arg("b"));
    m.def("qfi_by_quadrature",
          [](const RealVector& nodes, const RealVector& weights, double seed_norm) {
              QuadratureRule rule;
              rule.nodes = nodes;
              rule.weights = weights;
              return qfi_by_quadrature(rule, seed_norm);
          },
          py::arg("nodes"), py::arg("weights"), py::arg("seed_norm") = 1.0);

    m.attr("__version__") = "1.0.0";
}
