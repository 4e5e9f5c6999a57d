#include "mortkit/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include <json.hpp>

#include "mortkit/csv.hpp"
#include "mortkit/data_io.hpp"
#include "mortkit/errors.hpp"
#include "mortkit/kt_dynamics.hpp"
#include "mortkit/lc_model.hpp"
#include "mortkit/lifetable.hpp"
#include "mortkit/projection.hpp"

namespace mortkit {

namespace {

using ordered_json = nlohmann::ordered_json;

long round_per_100k(double rate) {
  return static_cast<long>(std::floor(rate * 1e5 + 0.5));
}

void write_file(const std::filesystem::path& path, const std::string& content,
                std::ostream& out) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << content)) {
    throw IoError("cannot write " + path.string());
  }
  out << "wrote " << path.string() << "\n";
}

std::filesystem::path prepare_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory " + cfg.out_dir.string() +
                  ": " + ec.message());
  }
  return cfg.out_dir;
}

QSurface load_input(const RunConfig& cfg) {
  if (cfg.input.empty()) {
    throw ValidationError("this command requires --input");
  }
  return load_q_csv(cfg.input, ParseOptions{cfg.infant_separation});
}

/// Input surface converted to central rates, with the open row imputed from
/// the parameter file when the input carries a placeholder.
MortalitySurface observed_surface(const RunConfig& cfg, const QSurface& q) {
  MortalitySurface m = q_to_m(q);
  if (!m.open_placeholder()) return m;
  if (cfg.params.empty()) {
    throw ValidationError(
        "input has an open-group placeholder; --params must supply "
        "alpha/beta/k for the imputation");
  }
  const LCParams p = load_params_csv(cfg.params, cfg.infant_separation);
  if (p.periods != m.periods()) {
    throw ValidationError("parameter periods do not match the input periods");
  }
  if (p.grid.labels() != m.grid().labels()) {
    throw ValidationError("parameter age groups do not match the input grid");
  }
  return impute_open_group(m, p.alpha.back(), p.beta.back(), p.k);
}

/// Model parameters: taken from --params when given, otherwise fitted from
/// the observed surface.
LCParams model_params(const RunConfig& cfg, const MortalitySurface* observed,
                      bool prefer_file, std::string& source) {
  if (prefer_file && !cfg.params.empty()) {
    source = "file:" + cfg.params.string();
    return load_params_csv(cfg.params, cfg.infant_separation);
  }
  if (observed == nullptr) {
    throw ValidationError("either --input or --params is required");
  }
  source = "fit:" + cfg.input.string();
  return fit_lc(*observed);
}

std::string sanitize(const std::string& label) {
  std::string out = label;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-') c = '_';
  }
  return out;
}

// ---- CSV table writers ----------------------------------------------------

std::string forecast_csv(const ProjectionReport& report, const KForecast& f,
                         const KInterval& band) {
  std::string out = "period,khat,se,lo,hi\n";
  for (std::size_t h = 0; h < f.khat.size(); ++h) {
    out += report.periods[h];
    out += ',' + csv::fixed(f.khat[h], 6);
    out += ',' + csv::fixed(f.se[h], 6);
    out += ',' + csv::fixed(band.lo[h], 6);
    out += ',' + csv::fixed(band.hi[h], 6);
    out += '\n';
  }
  return out;
}

std::string rates_csv(const AgeGrid& grid, const ProjectionReport& report) {
  std::string out = "age";
  for (const std::string& p : report.periods) out += ',' + p;
  out += '\n';
  for (std::size_t x = 0; x < grid.size(); ++x) {
    out += grid[x].label;
    for (std::size_t h = 0; h < report.periods.size(); ++h) {
      out += ',' + std::to_string(round_per_100k(report.rates[x][h]));
    }
    out += '\n';
  }
  return out;
}

std::string le_csv(const AgeGrid& grid, const ProjectionReport& report) {
  std::string out = "age";
  for (const std::string& p : report.periods) out += ',' + p;
  out += '\n';
  for (std::size_t x = 0; x < grid.size(); ++x) {
    out += grid[x].label;
    for (std::size_t h = 0; h < report.periods.size(); ++h) {
      out += ',' + csv::fixed(report.life_expectancy[x][h], 2);
    }
    out += '\n';
  }
  return out;
}

std::string le_ci_csv(const AgeGrid& grid, const ProjectionReport& report) {
  std::string out = "age";
  for (const std::string& p : report.periods) {
    out += ',' + p + " lo," + p + " hi";
  }
  out += '\n';
  for (std::size_t x = 0; x < grid.size(); ++x) {
    out += grid[x].label;
    for (std::size_t h = 0; h < report.periods.size(); ++h) {
      out += ',' + csv::fixed(report.ci_lo[x][h], 2);
      out += ',' + csv::fixed(report.ci_hi[x][h], 2);
    }
    out += '\n';
  }
  return out;
}

std::string fit_eval_csv(const FitEvaluation& eval, const AgeGrid& grid) {
  std::string out = "age,period,observed_e,model_e,abs_diff\n";
  for (std::size_t x = 0; x < grid.size(); ++x) {
    for (std::size_t j = 0; j < eval.periods.size(); ++j) {
      out += grid[x].label + ',' + eval.periods[j];
      out += ',' + csv::fixed(eval.observed[x][j], 2);
      out += ',' + csv::fixed(eval.estimated[x][j], 2);
      out += ',' + csv::fixed(eval.difference[x][j], 2);
      out += '\n';
    }
  }
  return out;
}

/// Long-format plot data: one (series, x, value) row per point.
std::string curves_csv(const std::string& x_name,
                       const std::vector<std::string>& series,
                       const std::vector<std::string>& xs,
                       const std::vector<std::vector<double>>& values,
                       int decimals) {
  std::string out = "series," + x_name + ",value\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out += series[s] + ',' + xs[i] + ',' + csv::fixed(values[s][i], decimals);
      out += '\n';
    }
  }
  return out;
}

std::vector<std::size_t> spread_indices(std::size_t count, std::size_t wanted) {
  std::vector<std::size_t> idx;
  if (count == 0) return idx;
  wanted = std::min(wanted, count);
  for (std::size_t i = 0; i < wanted; ++i) {
    idx.push_back(i * (count - 1) / (wanted > 1 ? wanted - 1 : 1));
  }
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return idx;
}

// ---- JSON bundle ------------------------------------------------------------

ordered_json params_json(const LCParams& p) {
  ordered_json j;
  j["ages"] = p.grid.labels();
  j["periods"] = p.periods;
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  j["k"] = p.k;
  if (p.frob2 > 0.0) {
    j["lambda1"] = p.lambda1;
    j["frob2"] = p.frob2;
    j["explained"] = p.explained;
  }
  return j;
}

ordered_json index_model_json(const IndexModel& rw2, std::span<const double> k) {
  ordered_json j;
  j["kind"] = "rw2";
  j["sigma"] = rw2.sigma;
  const auto aic2 = model_aic(rw2, k);
  j["aic"] = aic2 ? ordered_json(*aic2) : ordered_json("degenerate");
  const IndexModel rwd = fit_rwd(k);
  const auto aic1 = model_aic(rwd, k);
  j["rwd"] = {{"drift", rwd.drift},
              {"sigma", rwd.sigma},
              {"aic", aic1 ? ordered_json(*aic1) : ordered_json("degenerate")}};
  return j;
}

ordered_json projection_json(const AgeGrid& grid, const ProjectionReport& report) {
  ordered_json j;
  j["periods"] = report.periods;
  j["confidence"] = report.confidence;
  ordered_json per100k = ordered_json::array();
  for (std::size_t x = 0; x < grid.size(); ++x) {
    ordered_json row = ordered_json::array();
    for (double r : report.rates[x]) row.push_back(round_per_100k(r));
    per100k.push_back(std::move(row));
  }
  j["rates"] = report.rates;
  j["rates_per_100k"] = std::move(per100k);
  j["life_expectancy"] = report.life_expectancy;
  j["ci_lo"] = report.ci_lo;
  j["ci_hi"] = report.ci_hi;
  return j;
}

ordered_json config_json(const RunConfig& cfg) {
  ordered_json j;
  j["sex"] = cfg.sex;
  j["horizon"] = cfg.horizon;
  j["confidence"] = cfg.confidence;
  j["infant_separation"] = cfg.infant_separation;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

// ---- commands ----------------------------------------------------------------

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const QSurface q = load_input(cfg);
  double lo = 1.0;
  double hi = 0.0;
  for (double v : q.values()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  out << q.n_ages() << " ages × " << q.n_periods() << " periods";
  if (q.open_placeholder()) out << ", open-group placeholder detected";
  out << "\n";
  out << "q range [" << csv::fixed(lo, 5) << ", " << csv::fixed(hi, 5) << "]\n";
  return 0;
}

int cmd_fit(const RunConfig& cfg, std::ostream& out) {
  const auto dir = prepare_out_dir(cfg);
  const QSurface q = load_input(cfg);
  const MortalitySurface m = observed_surface(cfg, q);
  const LCParams p = fit_lc(m);
  const Matrix eps = residual_surface(m, p);
  double rss = 0.0;
  double worst = 0.0;
  for (double e : eps.data) {
    rss += e * e;
    worst = std::max(worst, std::abs(e));
  }

  write_file(dir / ("params_" + cfg.sex + ".csv"), serialize_params(p), out);

  const MortalitySurface fitted = fitted_surface(p);
  const std::vector<std::size_t> sel = spread_indices(m.n_periods(), 4);
  std::vector<std::string> series;
  std::vector<std::vector<double>> curves;
  for (std::size_t t : sel) {
    series.push_back("observed " + m.periods()[t]);
    curves.push_back(m.column(t));
    series.push_back("fitted " + m.periods()[t]);
    curves.push_back(fitted.column(t));
  }
  write_file(dir / ("plot_fit_" + cfg.sex + ".csv"),
             curves_csv("age", series, m.grid().labels(), curves, 6), out);

  if (cfg.format == OutputFormat::kJson) {
    ordered_json j;
    j["tool"] = "mortkit";
    j["command"] = "fit";
    j["config"] = config_json(cfg);
    j["provenance"] = {{"input", cfg.input.string()},
                       {"params", cfg.params.string()}};
    j["params"] = params_json(p);
    j["residuals"] = {{"sum_sq", rss}, {"max_abs", worst}};
    write_file(dir / ("fit_summary_" + cfg.sex + ".json"), dump(j), out);
  } else {
    std::string summary = "key,value\n";
    summary += "ages," + std::to_string(m.n_ages()) + '\n';
    summary += "periods," + std::to_string(m.n_periods()) + '\n';
    summary += "lambda1," + csv::fixed(p.lambda1, 6) + '\n';
    summary += "explained," + csv::fixed(p.explained, 6) + '\n';
    summary += "residual_sum_sq," + csv::fixed(rss, 6) + '\n';
    summary += "residual_max_abs," + csv::fixed(worst, 6) + '\n';
    write_file(dir / ("fit_summary_" + cfg.sex + ".csv"), summary, out);
  }

  out << "explained variance " << csv::fixed(p.explained, 4) << "\n";
  return 0;
}

int cmd_forecast(const RunConfig& cfg, std::ostream& out) {
  const auto dir = prepare_out_dir(cfg);

  std::string source;
  LCParams p;
  std::optional<QSurface> q;
  std::optional<MortalitySurface> m;
  if (!cfg.input.empty()) {
    q = load_input(cfg);
    m = observed_surface(cfg, *q);
    p = model_params(cfg, &*m, /*prefer_file=*/false, source);
  } else {
    p = model_params(cfg, nullptr, /*prefer_file=*/true, source);
  }

  const IndexModel rw2 = fit_rw2(p.k);
  const KForecast f = forecast_k(rw2, static_cast<std::size_t>(cfg.horizon));
  const KInterval band = k_interval(f, cfg.confidence);
  ProjectionReport report =
      make_projection_report(p, f, p.grid, cfg.confidence, source);

  const auto aic2 = model_aic(rw2, p.k);
  const IndexModel rwd = fit_rwd(p.k);
  const auto aic1 = model_aic(rwd, p.k);
  out << "index model rw2: sigma " << csv::fixed(rw2.sigma, 4) << ", aic "
      << (aic2 ? csv::fixed(*aic2, 3) : "degenerate") << "; rwd: drift "
      << csv::fixed(rwd.drift, 4) << ", sigma " << csv::fixed(rwd.sigma, 4)
      << ", aic " << (aic1 ? csv::fixed(*aic1, 3) : "degenerate") << "\n";

  if (cfg.format == OutputFormat::kJson) {
    ordered_json j;
    j["tool"] = "mortkit";
    j["command"] = "forecast";
    j["config"] = config_json(cfg);
    j["provenance"] = {{"input", cfg.input.string()},
                       {"params", cfg.params.string()},
                       {"model_source", source}};
    j["params"] = params_json(p);
    j["index_model"] = index_model_json(rw2, p.k);
    j["forecast"] = {{"periods", report.periods},
                     {"khat", f.khat},
                     {"se", f.se},
                     {"lo", band.lo},
                     {"hi", band.hi}};
    j["projection"] = projection_json(p.grid, report);
    write_file(dir / ("forecast_" + cfg.sex + ".json"), dump(j), out);
  } else {
    write_file(dir / ("kforecast_" + cfg.sex + ".csv"),
               forecast_csv(report, f, band), out);
    write_file(dir / ("rates_" + cfg.sex + ".csv"), rates_csv(p.grid, report), out);
    write_file(dir / ("le_" + cfg.sex + ".csv"), le_csv(p.grid, report), out);
    write_file(dir / ("le_ci_" + cfg.sex + ".csv"), le_ci_csv(p.grid, report), out);
  }

  if (m) {
    // Historical rate and life-expectancy curves for plotting.
    std::vector<std::string> rate_series;
    std::vector<std::vector<double>> rate_curves;
    for (std::size_t t : spread_indices(m->n_periods(), 4)) {
      rate_series.push_back("observed " + m->periods()[t]);
      rate_curves.push_back(m->column(t));
    }
    write_file(dir / ("plot_rates_" + cfg.sex + ".csv"),
               curves_csv("age", rate_series, m->grid().labels(), rate_curves, 6),
               out);

    const auto profile = life_expectancy_profile(*m);
    std::vector<std::string> e_series;
    std::vector<std::vector<double>> e_curves;
    for (std::size_t x = 0; x < m->n_ages(); ++x) {
      e_series.push_back("e " + m->grid()[x].label);
      e_curves.push_back(profile[x]);
    }
    write_file(dir / ("plot_e_" + cfg.sex + ".csv"),
               curves_csv("period", e_series, m->periods(), e_curves, 4), out);
  }
  return 0;
}

int cmd_lifetable(const RunConfig& cfg, std::ostream& out) {
  const auto dir = prepare_out_dir(cfg);
  const QSurface q = load_input(cfg);
  const MortalitySurface m = observed_surface(cfg, q);

  std::vector<std::size_t> selected;
  if (!cfg.period.empty()) {
    auto it = std::find(m.periods().begin(), m.periods().end(), cfg.period);
    if (it == m.periods().end()) {
      throw ValidationError("unknown period label '" + cfg.period + "'");
    }
    selected.push_back(static_cast<std::size_t>(it - m.periods().begin()));
  } else {
    for (std::size_t t = 0; t < m.n_periods(); ++t) selected.push_back(t);
  }

  if (cfg.format == OutputFormat::kJson) {
    ordered_json j;
    j["tool"] = "mortkit";
    j["command"] = "lifetable";
    j["config"] = config_json(cfg);
    j["ages"] = m.grid().labels();
    ordered_json tables = ordered_json::object();
    for (std::size_t t : selected) {
      const LifeTable table = build_life_table(m.column(t), m.grid());
      tables[m.periods()[t]] = {{"q", table.qx}, {"l", table.lx},
                                {"d", table.dx}, {"L", table.Lx},
                                {"T", table.Tx}, {"e", table.ex}};
    }
    j["tables"] = std::move(tables);
    write_file(dir / ("lifetables_" + cfg.sex + ".json"), dump(j), out);
  } else {
    for (std::size_t t : selected) {
      const LifeTable table = build_life_table(m.column(t), m.grid());
      write_file(dir / ("lifetable_" + cfg.sex + "_" +
                        sanitize(m.periods()[t]) + ".csv"),
                 serialize_life_table(table), out);
    }
  }
  return 0;
}

int cmd_report(const RunConfig& cfg, std::ostream& out) {
  const auto dir = prepare_out_dir(cfg);
  const QSurface q = load_input(cfg);
  const MortalitySurface m = observed_surface(cfg, q);
  std::string source;
  const LCParams p = model_params(cfg, &m, /*prefer_file=*/true, source);
  if (p.periods != m.periods()) {
    throw ValidationError("parameter periods do not match the input periods");
  }

  const std::vector<std::size_t> sel = spread_indices(m.n_periods(), 4);
  std::vector<std::string> eval_periods;
  for (std::size_t t : sel) eval_periods.push_back(m.periods()[t]);
  const FitEvaluation eval = fit_evaluation(m, p, eval_periods);

  const IndexModel rw2 = fit_rw2(p.k);
  const KForecast f = forecast_k(rw2, static_cast<std::size_t>(cfg.horizon));
  const KInterval band = k_interval(f, cfg.confidence);
  const ProjectionReport report =
      make_projection_report(p, f, p.grid, cfg.confidence, source);

  if (cfg.format == OutputFormat::kJson) {
    ordered_json j;
    j["tool"] = "mortkit";
    j["command"] = "report";
    j["config"] = config_json(cfg);
    j["provenance"] = {{"input", cfg.input.string()},
                       {"params", cfg.params.string()},
                       {"model_source", source}};
    j["params"] = params_json(p);
    j["fit_evaluation"] = {{"periods", eval.periods},
                           {"observed", eval.observed},
                           {"estimated", eval.estimated},
                           {"abs_diff", eval.difference}};
    j["index_model"] = index_model_json(rw2, p.k);
    j["forecast"] = {{"periods", report.periods},
                     {"khat", f.khat},
                     {"se", f.se},
                     {"lo", band.lo},
                     {"hi", band.hi}};
    j["projection"] = projection_json(p.grid, report);
    write_file(dir / ("report_" + cfg.sex + ".json"), dump(j), out);
    return 0;
  }

  std::string doc;
  doc += "# mortkit report\n";
  doc += "# sex: " + cfg.sex + "\n";
  doc += "# input: " + cfg.input.string() + "\n";
  doc += "# model: " + source + "\n";
  doc += "# horizon: " + std::to_string(cfg.horizon) + "\n";
  doc += "# confidence: " + csv::fixed(cfg.confidence, 2) + "\n";
  doc += "\n== model parameters ==\n" + serialize_params(p);
  doc += "\n== fit evaluation (life expectancy) ==\n" + fit_eval_csv(eval, p.grid);
  doc += "\n== index forecast ==\n" + forecast_csv(report, f, band);
  doc += "\n== projected rates per 100000 ==\n" + rates_csv(p.grid, report);
  doc += "\n== projected life expectancy ==\n" + le_csv(p.grid, report);
  doc += "\n== life expectancy confidence bounds ==\n" + le_ci_csv(p.grid, report);
  write_file(dir / ("report_" + cfg.sex + ".csv"), doc, out);
  return 0;
}

}  // namespace

int run_command(std::string_view command, const RunConfig& cfg,
                std::ostream& out, std::ostream& err) {
  try {
    if (command == "validate") return cmd_validate(cfg, out);
    if (command == "fit") return cmd_fit(cfg, out);
    if (command == "forecast") return cmd_forecast(cfg, out);
    if (command == "lifetable") return cmd_lifetable(cfg, out);
    if (command == "report") return cmd_report(cfg, out);
    err << "unknown command '" << command << "'\n";
    return 1;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace mortkit
