#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mortkit/data_io.hpp"
#include "mortkit/errors.hpp"
#include "mortkit/kt_dynamics.hpp"
#include "mortkit/lc_model.hpp"
#include "mortkit/lifetable.hpp"
#include "mortkit/projection.hpp"

namespace py = pybind11;
using namespace mortkit;

namespace {

std::vector<std::vector<double>> surface_rows(const MortalitySurface& m) {
  std::vector<std::vector<double>> rows(m.n_ages());
  for (std::size_t x = 0; x < m.n_ages(); ++x) {
    const auto r = m.row(x);
    rows[x].assign(r.begin(), r.end());
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_mortkit, m) {
  m.doc() = "Abridged life tables, log-bilinear mortality fits and index forecasts";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<AgeGroup>(m, "AgeGroup")
      .def_readonly("label", &AgeGroup::label)
      .def_readonly("width", &AgeGroup::width)
      .def_readonly("separation", &AgeGroup::separation)
      .def_readonly("open", &AgeGroup::open);

  py::class_<AgeGrid>(m, "AgeGrid")
      .def_static("peru", &AgeGrid::peru,
                  py::arg("infant_separation") = kDefaultInfantSeparation)
      .def_static("from_labels", &AgeGrid::from_labels, py::arg("labels"),
                  py::arg("infant_separation") = kDefaultInfantSeparation)
      .def("__len__", &AgeGrid::size)
      .def("__getitem__",
           [](const AgeGrid& g, std::size_t i) {
             if (i >= g.size()) throw py::index_error();
             return g[i];
           })
      .def("labels", &AgeGrid::labels);

  py::class_<QSurface>(m, "QSurface")
      .def_property_readonly("n_ages", &QSurface::n_ages)
      .def_property_readonly("n_periods", &QSurface::n_periods)
      .def_property_readonly("periods", &QSurface::periods)
      .def_property_readonly("open_placeholder", &QSurface::open_placeholder)
      .def("grid", &QSurface::grid)
      .def("at", &QSurface::at, py::arg("age"), py::arg("period"));

  py::class_<MortalitySurface>(m, "MortalitySurface")
      .def_property_readonly("n_ages", &MortalitySurface::n_ages)
      .def_property_readonly("n_periods", &MortalitySurface::n_periods)
      .def_property_readonly("periods", &MortalitySurface::periods)
      .def_property_readonly("open_placeholder", &MortalitySurface::open_placeholder)
      .def("grid", &MortalitySurface::grid)
      .def("at", &MortalitySurface::at, py::arg("age"), py::arg("period"))
      .def("column", &MortalitySurface::column, py::arg("period"))
      .def("rows", &surface_rows);

  py::class_<LCParams>(m, "LCParams")
      .def_property_readonly("ages",
                             [](const LCParams& p) { return p.grid.labels(); })
      .def_readonly("periods", &LCParams::periods)
      .def_readonly("alpha", &LCParams::alpha)
      .def_readonly("beta", &LCParams::beta)
      .def_readonly("k", &LCParams::k)
      .def_readonly("lambda1", &LCParams::lambda1)
      .def_readonly("frob2", &LCParams::frob2)
      .def_readonly("explained", &LCParams::explained)
      .def("grid", [](const LCParams& p) { return p.grid; });

  py::class_<LifeTable>(m, "LifeTable")
      .def_property_readonly("ages",
                             [](const LifeTable& t) { return t.grid.labels(); })
      .def_readonly("q", &LifeTable::qx)
      .def_readonly("l", &LifeTable::lx)
      .def_readonly("d", &LifeTable::dx)
      .def_readonly("L", &LifeTable::Lx)
      .def_readonly("T", &LifeTable::Tx)
      .def_readonly("e", &LifeTable::ex);

  py::enum_<IndexModelKind>(m, "IndexModelKind")
      .value("RW2", IndexModelKind::kRw2)
      .value("RWD", IndexModelKind::kRwd);

  py::class_<IndexModel>(m, "IndexModel")
      .def_readonly("kind", &IndexModel::kind)
      .def_readonly("sigma", &IndexModel::sigma)
      .def_readonly("drift", &IndexModel::drift)
      .def_readonly("length", &IndexModel::length)
      .def_readonly("k_last", &IndexModel::k_last)
      .def_readonly("k_prev", &IndexModel::k_prev);

  py::class_<KForecast>(m, "KForecast")
      .def_readonly("khat", &KForecast::khat)
      .def_readonly("se", &KForecast::se);

  py::class_<KInterval>(m, "KInterval")
      .def_readonly("lo", &KInterval::lo)
      .def_readonly("hi", &KInterval::hi);

  py::class_<FitEvaluation>(m, "FitEvaluation")
      .def_readonly("periods", &FitEvaluation::periods)
      .def_readonly("observed", &FitEvaluation::observed)
      .def_readonly("estimated", &FitEvaluation::estimated)
      .def_readonly("difference", &FitEvaluation::difference);

  py::class_<ProjectionReport>(m, "ProjectionReport")
      .def_readonly("periods", &ProjectionReport::periods)
      .def_readonly("rates", &ProjectionReport::rates)
      .def_readonly("life_expectancy", &ProjectionReport::life_expectancy)
      .def_readonly("ci_lo", &ProjectionReport::ci_lo)
      .def_readonly("ci_hi", &ProjectionReport::ci_hi)
      .def_readonly("confidence", &ProjectionReport::confidence)
      .def_readonly("provenance", &ProjectionReport::provenance);

  m.def("parse_abridged_table",
        [](const std::string& text, double a0) {
          return parse_abridged_table(text, ParseOptions{a0});
        },
        py::arg("text"), py::arg("infant_separation") = kDefaultInfantSeparation);
  m.def("load_q_csv",
        [](const std::filesystem::path& path, double a0) {
          return load_q_csv(path, ParseOptions{a0});
        },
        py::arg("path"), py::arg("infant_separation") = kDefaultInfantSeparation);
  m.def("serialize_q", &serialize_q);
  m.def("q_to_m_cell", &q_to_m_cell, py::arg("q"), py::arg("width"),
        py::arg("separation"));
  m.def("q_to_m", &q_to_m);
  m.def("impute_open_group",
        [](const MortalitySurface& m_, double alpha_open, double beta_open,
           const std::vector<double>& k) {
          return impute_open_group(m_, alpha_open, beta_open, k);
        },
        py::arg("m"), py::arg("alpha_open"), py::arg("beta_open"), py::arg("k"));

  m.def("q_from_m", &q_from_m, py::arg("m"), py::arg("width"), py::arg("separation"));
  m.def("build_life_table",
        [](const std::vector<double>& m_, const AgeGrid& grid, double radix) {
          return build_life_table(m_, grid, radix);
        },
        py::arg("m"), py::arg("grid"), py::arg("radix") = 1.0);
  m.def("life_expectancy_profile", &life_expectancy_profile);

  m.def("fit_lc", &fit_lc);
  m.def("fitted_surface", &fitted_surface);
  m.def("load_params_csv",
        [](const std::filesystem::path& path, double a0) {
          return load_params_csv(path, a0);
        },
        py::arg("path"), py::arg("infant_separation") = kDefaultInfantSeparation);
  m.def("serialize_params", &serialize_params, py::arg("params"),
        py::arg("decimals") = 6);

  m.def("fit_rw2",
        [](const std::vector<double>& k) { return fit_rw2(k); }, py::arg("k"));
  m.def("fit_rwd",
        [](const std::vector<double>& k) { return fit_rwd(k); }, py::arg("k"));
  m.def("model_aic",
        [](const IndexModel& model, const std::vector<double>& k) {
          return model_aic(model, k);
        },
        py::arg("model"), py::arg("k"));
  m.def("forecast_k", &forecast_k, py::arg("model"), py::arg("horizon"));
  m.def("k_interval", &k_interval, py::arg("forecast"), py::arg("level"));
  m.def("normal_quantile", &normal_quantile, py::arg("p"));

  m.def("project_rates", &project_rates, py::arg("params"), py::arg("forecast"));
  m.def("project_life_expectancy", &project_life_expectancy, py::arg("params"),
        py::arg("forecast"), py::arg("grid"));
  m.def("le_confidence_interval",
        [](const LCParams& p, const KForecast& f, const AgeGrid& grid,
           double level) {
          std::vector<std::vector<double>> lo;
          std::vector<std::vector<double>> hi;
          le_confidence_interval(p, f, grid, level, lo, hi);
          return py::make_tuple(lo, hi);
        },
        py::arg("params"), py::arg("forecast"), py::arg("grid"), py::arg("level"));
  m.def("fit_evaluation",
        [](const MortalitySurface& observed, const LCParams& p,
           const std::vector<std::string>& periods) {
          return fit_evaluation(observed, p, periods);
        },
        py::arg("observed"), py::arg("params"), py::arg("periods"));
  m.def("continue_period_labels",
        [](const std::vector<std::string>& periods, std::size_t horizon) {
          return continue_period_labels(periods, horizon);
        },
        py::arg("periods"), py::arg("horizon"));
  m.def("make_projection_report", &make_projection_report, py::arg("params"),
        py::arg("forecast"), py::arg("grid"), py::arg("level"),
        py::arg("provenance") = "");

#ifdef MORTKIT_VERSION
  m.attr("__version__") = MORTKIT_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
