#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <complex>
#include <cstring>

#include "nse/commands.hpp"
#include "nse/error.hpp"

namespace py = pybind11;
using namespace nse;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

std::span<const double> view(const RealArray& a) {
  if (a.ndim() != 1) throw ShapeError("expected a one-dimensional array");
  return {a.data(), static_cast<std::size_t>(a.size())};
}

template <typename T>
py::array_t<T> to_numpy(const std::vector<T>& v) {
  py::array_t<T> out(static_cast<py::ssize_t>(v.size()));
  std::memcpy(out.mutable_data(), v.data(), v.size() * sizeof(T));
  return out;
}

py::array_t<std::complex<double>> alm_to_numpy(const Alm& alm) {
  const auto d = alm.data();
  return to_numpy(std::vector<std::complex<double>>(d.begin(), d.end()));
}

Alm alm_from_numpy(int lmax, const ComplexArray& a) {
  Alm alm(lmax);
  if (a.ndim() != 1 || static_cast<std::size_t>(a.size()) != alm.size())
    throw ShapeError("Alm of lmax " + std::to_string(lmax) + " needs " + std::to_string(alm.size()) +
                     " packed coefficients, got " + std::to_string(a.size()));
  std::memcpy(alm.data().data(), a.data(), alm.size() * sizeof(std::complex<double>));
  return alm;
}

WindowFamily make_family(double B, int M, const std::string& mode, int j_min, int j_max) {
  return WindowFamily(CutoffFunction::build(B, M), parse_window_mode(mode), j_min, j_max);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Needlet spectral estimation core";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidParameter>(m, "InvalidParameter", base.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<IndexError>(m, "IndexError", base.ptr());
  py::register_exception<ConventionViolation>(m, "ConventionViolation", base.ptr());
  py::register_exception<AllMaskedError>(m, "AllMaskedError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());

  py::class_<CutoffFunction>(m, "CutoffFunction")
      .def_static("build", &CutoffFunction::build, py::arg("B"), py::arg("M"))
      .def_property_readonly("degree", &CutoffFunction::degree)
      .def_property_readonly("coefficients", [](const CutoffFunction& c) {
        const auto s = c.coefficients();
        return to_numpy(std::vector<double>(s.begin(), s.end()));
      })
      .def("__call__", &CutoffFunction::operator(), py::arg("x"))
      .def("derivative", &CutoffFunction::derivative, py::arg("x"), py::arg("order"));

  py::class_<WindowFamily>(m, "WindowFamily")
      .def(py::init(&make_family), py::arg("B") = 2.0, py::arg("M") = 5, py::arg("mode") = "tight",
           py::arg("j_min") = 0, py::arg("j_max") = 8)
      .def("__call__", &WindowFamily::operator(), py::arg("j"), py::arg("l"))
      .def("band", [](const WindowFamily& f, int j) {
        const auto b = f.band(j);
        return py::make_tuple(b.l_min, b.l_max);
      })
      .def("band_limit", &WindowFamily::band_limit)
      .def("table", [](const WindowFamily& f, int j) {
        const auto t = f.table(j);
        return to_numpy(std::vector<double>(t.begin(), t.end()));
      })
      .def_property_readonly("j_min", &WindowFamily::j_min)
      .def_property_readonly("j_max", &WindowFamily::j_max)
      .def_property_readonly("mode", [](const WindowFamily& f) { return std::string(to_string(f.mode())); });

  py::class_<Pixelization>(m, "Pixelization")
      .def(py::init<int>(), py::arg("order"))
      .def_property_readonly("order", &Pixelization::order)
      .def_property_readonly("size", &Pixelization::size)
      .def_property_readonly("n_rings", &Pixelization::n_rings)
      .def_property_readonly("n_phi", &Pixelization::n_phi)
      .def_property_readonly("weights", [](const Pixelization& p) {
        const auto w = p.weights();
        return to_numpy(std::vector<double>(w.begin(), w.end()));
      })
      .def_property_readonly("points", [](const Pixelization& p) {
        py::array_t<double> out({static_cast<py::ssize_t>(p.size()), py::ssize_t{3}});
        auto v = out.mutable_unchecked<2>();
        for (std::size_t k = 0; k < p.size(); ++k) {
          v(k, 0) = p.point(k).x;
          v(k, 1) = p.point(k).y;
          v(k, 2) = p.point(k).z;
        }
        return out;
      })
      .def_property_readonly("theta", [](const Pixelization& p) {
        std::vector<double> t(p.size());
        for (std::size_t k = 0; k < t.size(); ++k) t[k] = p.theta(k);
        return to_numpy(t);
      })
      .def_property_readonly("phi", [](const Pixelization& p) {
        std::vector<double> t(p.size());
        for (std::size_t k = 0; k < t.size(); ++k) t[k] = p.phi(k);
        return to_numpy(t);
      });

  m.def("eval_ylm", [](int l, int mm, double theta, double phi) {
    return eval_ylm(l, mm, UnitVector::from_angles(theta, phi));
  }, py::arg("l"), py::arg("m"), py::arg("theta"), py::arg("phi"));
  m.def("eval_legendre_kernel", &eval_legendre_kernel, py::arg("l"), py::arg("t"));

  m.def("forward_sht", [](const RealArray& samples, const Pixelization& pix, int lmax) {
    return alm_to_numpy(forward_sht(view(samples), pix, lmax));
  }, py::arg("samples"), py::arg("pix"), py::arg("lmax"));
  m.def("inverse_sht", [](int lmax, const ComplexArray& alm, const Pixelization& pix) {
    return to_numpy(inverse_sht(alm_from_numpy(lmax, alm), pix));
  }, py::arg("lmax"), py::arg("alm"), py::arg("pix"));

  m.def("spectrum_values", [](double alpha, double B, int lmax, double g0, double modulation) {
    SpectrumModel model;
    model.alpha = alpha;
    model.band_ratio = B;
    model.g0 = g0;
    model.modulation = modulation;
    model.shape = modulation == 0.0 ? SpectrumModel::Shape::constant : SpectrumModel::Shape::modulated;
    return to_numpy(spectrum_values(model, 0, lmax));
  }, py::arg("alpha"), py::arg("B") = 2.0, py::arg("lmax") = 64, py::arg("g0") = 1.0, py::arg("modulation") = 0.0);
  m.def("synthesize_field", [](const RealArray& spectrum, int lmax, std::uint64_t seed, std::uint64_t replicate) {
    auto rng = SeededRng(seed).stream(replicate, StreamRole::signal);
    return alm_to_numpy(synthesize_field(view(spectrum), lmax, rng));
  }, py::arg("spectrum"), py::arg("lmax"), py::arg("seed"), py::arg("replicate") = 0);

  py::class_<NeedletScale>(m, "NeedletScale")
      .def(py::init<const WindowFamily&, int>(), py::arg("family"), py::arg("j"))
      .def_property_readonly("j", &NeedletScale::j)
      .def_property_readonly("size", &NeedletScale::size)
      .def_property_readonly("lmax", &NeedletScale::lmax)
      .def_property_readonly("pix", &NeedletScale::pix, py::return_value_policy::reference_internal)
      .def_property_readonly("kernel_energy", &NeedletScale::kernel_energy)
      .def("eval_needlet", [](const NeedletScale& s, std::size_t k, double theta, double phi) {
        return eval_needlet(s, k, UnitVector::from_angles(theta, phi));
      }, py::arg("k"), py::arg("theta"), py::arg("phi"));

  m.def("needlet_transform", [](int lmax, const ComplexArray& alm, const NeedletScale& s) {
    return to_numpy(needlet_transform(alm_from_numpy(lmax, alm), s));
  }, py::arg("lmax"), py::arg("alm"), py::arg("scale"));
  m.def("needlet_coeffs_of_sequence", [](const RealArray& v, const NeedletScale& s) {
    return to_numpy(needlet_coeffs_of_sequence(view(v), s));
  }, py::arg("values"), py::arg("scale"));
  m.def("noise_levels", [](const NeedletScale& s, const RealArray& mask, const RealArray& sigma) {
    return to_numpy(noise_levels(s, effective_noise(view(mask), view(sigma))));
  }, py::arg("scale"), py::arg("mask"), py::arg("sigma"));
  m.def("mask_functional", [](const NeedletScale& s, const RealArray& mask, const std::string& norm) {
    return to_numpy(mask_functional(s, view(mask), parse_functional_norm(norm)));
  }, py::arg("scale"), py::arg("mask"), py::arg("norm") = "nominal");
  m.def("kept_set", [](const RealArray& f, double t) { return to_numpy(kept_set(view(f), t)); },
        py::arg("functional"), py::arg("threshold"));
  m.def("weights", [](const std::string& mode, const std::vector<std::size_t>& kept, const RealArray& noise_var,
                      double pilot) {
    return to_numpy(weights(parse_weight_mode(mode), kept, view(noise_var), pilot));
  }, py::arg("mode"), py::arg("kept"), py::arg("noise_var"), py::arg("pilot") = 0.0);
  m.def("estimate", [](const RealArray& gamma, const RealArray& noise_var, const RealArray& w) {
    return estimate(view(gamma), view(noise_var), view(w));
  }, py::arg("gamma"), py::arg("noise_var"), py::arg("weights"));
  m.def("target_cj", [](const WindowFamily& f, int j, const RealArray& c) { return target_cj(f, j, view(c)); },
        py::arg("family"), py::arg("j"), py::arg("spectrum"));
  m.def("relative_mse", [](const RealArray& e, double t) { return relative_mse(view(e), t); },
        py::arg("estimates"), py::arg("target"));
  m.def("anderson_darling", [](const RealArray& x) { return anderson_darling(view(x)); }, py::arg("x"));
  m.def("skew_kurt", [](const RealArray& x) { return skew_kurt(view(x)); }, py::arg("x"));

  m.def("run_mc", [](const std::filesystem::path& config, std::optional<std::uint64_t> seed, int replicates,
                     int threads) {
    auto cfg = load_config(config);
    if (seed) cfg.experiment.seed = *seed;
    if (replicates > 0) cfg.experiment.replicates = replicates;
    ExperimentResult result;
    {
      py::gil_scoped_release release;
      result = run_experiment(cfg.experiment, threads);
    }
    py::list rows;
    for (const auto& r : result.rows) {
      py::dict d;
      d["j"] = r.j;
      d["replicate"] = r.replicate;
      d["c_hat"] = r.c_hat;
      d["c_target"] = r.c_target;
      d["kept_count"] = r.kept_count;
      d["mode"] = std::string(to_string(r.mode));
      rows.append(d);
    }
    py::list summary;
    for (const auto& s : result.summary) {
      py::dict d;
      d["j"] = s.j;
      d["count"] = s.count;
      d["mean"] = s.mean;
      d["var"] = s.variance;
      d["bias"] = s.bias;
      d["rel_mse"] = s.rel_mse;
      d["skew"] = s.skewness;
      d["exkurt"] = s.excess_kurtosis;
      d["ad_stat"] = s.ad_stat;
      summary.append(d);
    }
    return py::make_tuple(rows, summary, result.missing);
  }, py::arg("config"), py::arg("seed") = py::none(), py::arg("replicates") = 0, py::arg("threads") = 1);
}
