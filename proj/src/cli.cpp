#include "volvol/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "volvol/distributions.hpp"
#include "volvol/error.hpp"
#include "volvol/ingest.hpp"
#include "volvol/lmv.hpp"
#include "volvol/normalize.hpp"
#include "volvol/tailfit.hpp"

namespace volvol::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr double kVolumeLo = -3.0;
constexpr double kVolumeHi = 3.0;

const std::vector<std::pair<std::string, std::string>> kFlags = {
    {"--input-dir", "input_dir"},     {"--output-dir", "output_dir"},   {"--g-min", "g_min"},
    {"--offset", "offset"},           {"--bins", "bins"},               {"--fraction", "fraction"},
    {"--max-lag", "max_lag"},         {"--quintile-mode", "quintile_mode"}, {"--seed", "seed"},
    {"--synth-scenario", "synth_scenario"}, {"--synth-days", "synth_days"}, {"--synth-tickers", "synth_tickers"},
    {"--synth-v-lo", "synth_v_lo"},   {"--synth-v-hi", "synth_v_hi"},   {"--fit-v-lo", "fit_v_lo"},
    {"--fit-v-hi", "fit_v_hi"},       {"--min-count", "min_count"},
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(x))
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  return x;
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
  std::uint64_t x = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  return x;
}

// ---- output helpers ----

std::string fmt(double x) {
  if (!std::isfinite(x)) return "";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::string& header) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot write " + path.string());
    out_ << header << '\n';
  }
  template <class... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(fields), first = false), ...);
    out_ << '\n';
  }
  ~CsvWriter() = default;
  void close() {
    out_.close();
    if (!out_) throw IoError("write failed: " + path_.string());
  }

 private:
  static std::string cell(double x) { return fmt(x); }
  static std::string cell(std::size_t x) { return std::to_string(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }

  fs::path path_;
  std::ofstream out_;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

json matrix_json(const std::vector<std::vector<double>>& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

void write_pdf_csv(const fs::path& path, const Pdf& pdf) {
  CsvWriter csv(path, "bin_center,density,count");
  for (std::size_t j = 0; j < pdf.bin_centers.size(); ++j) csv.row(pdf.bin_centers[j], pdf.densities[j], pdf.counts[j]);
  csv.close();
}

// ---- pipeline state ----

struct Data {
  std::vector<NormalizedSeries> universe;
  json validation;
};

Data load_data(const RunConfig& config) {
  Data data;
  if (config.input_dir) {
    const auto raw = load_universe(*config.input_dir);
    json tickers = json::array();
    json excluded = json::array();
    std::size_t retained = 0;
    for (std::size_t i = 0; i < raw.series.size(); ++i) {
      const auto& r = raw.reports[i];
      tickers.push_back({{"ticker", r.ticker},
                         {"rows_read", r.rows_read},
                         {"rows_retained", r.rows_retained},
                         {"rows_dropped_zero_volume", r.rows_dropped_zero_volume},
                         {"rows_dropped_malformed", r.rows_dropped_malformed},
                         {"rows_reordered", r.rows_reordered},
                         {"date_gaps", r.date_gaps}});
      retained += r.rows_retained;
      try {
        data.universe.push_back(normalize_series(raw.series[i]));
      } catch (const Error& e) {
        excluded.push_back(r.ticker + ": " + e.what());
      }
    }
    if (data.universe.empty()) throw AnalysisError("no series survived normalization");
    data.validation = {{"source", "files"},
                       {"input_dir", config.input_dir->generic_string()},
                       {"n_series", raw.series.size()},
                       {"total_rows_retained", retained},
                       {"tickers", tickers},
                       {"excluded_from_normalization", excluded}};
  } else {
    const SynthSpec& spec = *config.synth;
    data.universe = generate_universe(spec);
    data.validation = {{"source", "synthetic"},
                       {"scenario", to_string(spec.scenario)},
                       {"seed", spec.seed},
                       {"n_series", spec.n_tickers},
                       {"total_rows_retained", spec.n_tickers * spec.n_days},
                       {"tickers", json::array()},
                       {"excluded_from_normalization", json::array()}};
  }
  return data;
}

std::vector<GvPair> pooled_pairs(const std::vector<NormalizedSeries>& universe) {
  std::vector<GvPair> pooled;
  for (const auto& s : universe)
    for (std::size_t t = 0; t < s.size(); ++t) pooled.push_back({s.g[t], s.v[t]});
  return pooled;
}

Binning volume_binning(const RunConfig& c) { return Binning::linear(kVolumeLo, kVolumeHi, c.volume_bins); }

// ---- stages ----

void stage_ingest(const RunConfig& config, const Data& data, std::ostream& out) {
  write_json(config.output_dir / "validation_report.json", data.validation);
  out << "ingest: " << data.universe.size() << " series normalized, "
      << data.validation["total_rows_retained"].get<std::size_t>() << " rows retained ("
      << data.validation["source"].get<std::string>() << ")\n";
}

void stage_distributions(const RunConfig& config, const Data& data, std::ostream& out) {
  const auto pooled = pooled_pairs(data.universe);
  std::vector<double> g(pooled.size()), v(pooled.size());
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    g[i] = pooled[i].g;
    v[i] = pooled[i].v;
  }
  const auto vbins = volume_binning(config);
  const auto gbins = Binning::log(0.01, 100.0, 40);
  const auto vpdf = histogram_pdf(v, vbins);
  const auto gpdf = histogram_pdf(g, gbins);
  write_pdf_csv(config.output_dir / "volume_pdf.csv", vpdf);
  write_pdf_csv(config.output_dir / "volatility_pdf.csv", gpdf);

  const auto family = conditional_pdf(pooled, vbins, gbins, config.min_count);
  for (const auto& [j, pdf] : family.curves)
    write_pdf_csv(config.output_dir / ("conditional_pdf_bin" + std::to_string(j) + ".csv"), pdf);

  const double ks_normal = normality_check(v);
  const auto collapse = scale_collapse(pooled, vbins, config.collapse_offset, config.min_count);
  std::vector<double> centers;
  for (std::size_t j : collapse.bins) centers.push_back(vbins.center(j));
  json report = {{"offset", collapse.offset},
                 {"volume_bins", {{"lo", vbins.lo()}, {"hi", vbins.hi()}, {"n", vbins.size()}}},
                 {"min_count", config.min_count},
                 {"bins", collapse.bins},
                 {"bin_centers", centers},
                 {"bin_counts", collapse.bin_counts},
                 {"pairwise_ks", matrix_json(collapse.pairwise_ks)},
                 {"collapse_score", collapse.collapse_score},
                 {"unscaled_pairwise_ks", matrix_json(collapse.unscaled_pairwise_ks)},
                 {"unscaled_score", collapse.unscaled_score},
                 {"out_of_range", collapse.out_of_range},
                 {"n_samples", pooled.size()},
                 {"volatility_zero_or_out_of_log_range", gpdf.total_n - gpdf.in_range()},
                 {"normality_ks", ks_normal}};
  write_json(config.output_dir / "collapse_report.json", report);
  out << "distributions: " << pooled.size() << " samples, normality KS " << fmt(ks_normal) << ", "
      << family.curves.size() << " conditional curves, collapse score " << fmt(collapse.collapse_score)
      << " (unscaled " << fmt(collapse.unscaled_score) << ")\n";
}

void stage_fit(const RunConfig& config, const Data& data, std::ostream& out) {
  const auto pooled = pooled_pairs(data.universe);
  TailFitOptions options;
  options.g_min = config.g_min;
  options.v_lo = config.fit_v_lo;
  options.v_hi = config.fit_v_hi;
  const auto fit = fit_conditional_tail(pooled, options);

  const auto grid = density_grid(fit, Binning::log(config.g_min, 10.0, 40), volume_binning(config));
  json report = {{"alpha", fit.coef.alpha},
                 {"beta", fit.coef.beta},
                 {"a", fit.coef.a},
                 {"b", fit.coef.b},
                 {"g_min", fit.g_min},
                 {"n_tail", fit.n_tail},
                 {"nll", fit.nll},
                 {"n_below_g_min", fit.n_below_g_min},
                 {"n_outside_v_window", fit.n_outside_v_window},
                 {"v_window", {config.fit_v_lo, config.fit_v_hi}},
                 {"evaluations", fit.evaluations},
                 {"converged", fit.converged},
                 {"density_grid_omitted_v", grid.omitted_v}};
  write_json(config.output_dir / "fit_report.json", report);
  {
    std::ofstream txt(config.output_dir / "fit_report.txt", std::ios::binary);
    if (!txt) throw IoError("cannot write fit_report.txt");
    txt << "alpha = " << fmt(fit.coef.alpha) << "\nbeta = " << fmt(fit.coef.beta) << "\na = " << fmt(fit.coef.a)
        << "\nb = " << fmt(fit.coef.b) << "\ng_min = " << fmt(fit.g_min) << "\nn_tail = " << fit.n_tail
        << "\nnll = " << fmt(fit.nll) << '\n';
  }
  CsvWriter csv(config.output_dir / "density_grid.csv", "v,g,density");
  for (std::size_t iv = 0; iv < grid.v_values.size(); ++iv)
    for (std::size_t ig = 0; ig < grid.g_values.size(); ++ig)
      csv.row(grid.v_values[iv], grid.g_values[ig], grid.densities[iv][ig]);
  csv.close();
  out << "fit: alpha " << fmt(fit.coef.alpha) << ", beta " << fmt(fit.coef.beta) << ", a " << fmt(fit.coef.a)
      << ", b " << fmt(fit.coef.b) << " on " << fit.n_tail << " tail samples"
      << (grid.omitted_v.empty() ? "" : ", " + std::to_string(grid.omitted_v.size()) + " infeasible grid columns omitted")
      << '\n';
}

void stage_lmv(const RunConfig& config, const Data& data, std::ostream& out) {
  const auto bins = volume_binning(config);
  std::size_t files = 0;
  for (const auto& s : data.universe) {
    for (std::size_t lag = 0; lag <= config.max_lag; ++lag) {
      std::optional<LmvCurve> found;
      try {
        found = compute_lmv(s, bins, lag);
      } catch (const AnalysisError&) {
        continue;
      }
      const LmvCurve& curve = *found;
      CsvWriter csv(config.output_dir / ("lmv_lag" + std::to_string(lag) + "_" + s.ticker + ".csv"),
                    "bin_center,lmv,date");
      for (std::size_t j = 0; j < bins.size(); ++j)
        if (curve.occupied[j])
          csv.row(curve.bin_centers[j], curve.lmv[j], curve.lmv_dates[j] ? curve.lmv_dates[j]->to_string() : "");
      csv.close();
      ++files;
    }
  }
  const auto profile = lag_correlation_profile(data.universe, config.max_lag, bins);
  CsvWriter csv(config.output_dir / "lag_profile.csv",
                "lag,mean_rho_raw,std_rho_raw,mean_rho_lmv,std_rho_lmv,n_tickers");
  for (const auto& r : profile.rows)
    csv.row(r.lag, r.mean_rho_raw, r.std_rho_raw, r.mean_rho_lmv, r.std_rho_lmv, r.n_tickers);
  csv.close();
  const auto& r0 = profile.rows.front();
  out << "lmv: " << files << " curves, lag 0 mean rho_raw " << fmt(r0.mean_rho_raw) << ", mean rho_lmv "
      << fmt(r0.mean_rho_lmv) << " over " << r0.n_tickers << " tickers\n";
}

void stage_predict(const RunConfig& config, const Data& data, std::ostream& out) {
  for (auto cond : {Conditioner::volume, Conditioner::volatility}) {
    for (auto side : {Side::top, Side::bottom}) {
      const auto q = preceding_quintile_distribution(data.universe, cond, side, config.extreme_fraction);
      json j = {{"conditioner", to_string(cond)},
                {"side", to_string(side)},
                {"fraction", config.extreme_fraction},
                {"mean", q.mean},
                {"std", q.std},
                {"n_tickers", q.tickers.size()},
                {"excluded", q.excluded}};
      write_json(config.output_dir / (std::string("quintile_vec_") + to_string(cond) + "_" + to_string(side) + ".json"), j);
    }
  }
  double top55 = 0.0;
  for (auto side : {Side::top, Side::bottom}) {
    const auto grid = joint_quintile_grid(data.universe, side, config.extreme_fraction, config.quintile_mode);
    json cells = json::array(), counts = json::array(), events = json::array(), undefined = json::array();
    const std::string stem = std::string("quintile_grid_") + to_string(side);
    CsvWriter csv(config.output_dir / (stem + ".csv"),
                  "volume_quintile,volatility_quintile,relative_probability,cell_count,event_count");
    for (int i = 0; i < 5; ++i) {
      json row = json::array(), crow = json::array(), erow = json::array();
      for (int k = 0; k < 5; ++k) {
        const auto& c = grid.cells[i][k];
        row.push_back(c ? json(*c) : json(nullptr));
        if (!c) undefined.push_back({i + 1, k + 1});
        crow.push_back(grid.cell_counts[i][k]);
        erow.push_back(grid.event_counts[i][k]);
        csv.row(i + 1, k + 1, c ? *c : std::nan(""), grid.cell_counts[i][k], grid.event_counts[i][k]);
      }
      cells.push_back(row);
      counts.push_back(crow);
      events.push_back(erow);
    }
    csv.close();
    json j = {{"side", to_string(side)},
              {"fraction", config.extreme_fraction},
              {"quintile_mode", config.quintile_mode == QuintileMode::per_stock ? "per-stock" : "pooled"},
              {"row", "volume quintile"},
              {"column", "volatility quintile"},
              {"cells", cells},
              {"cell_counts", counts},
              {"event_counts", events},
              {"total_eligible", grid.total_eligible},
              {"total_events", grid.total_events},
              {"unconditioned", grid.unconditioned},
              {"undefined_cells", undefined},
              {"excluded", grid.excluded}};
    write_json(config.output_dir / (stem + ".json"), j);
    if (side == Side::top && grid.cells[4][4]) top55 = *grid.cells[4][4];
  }
  const auto r2 = regression_r2_uplift(data.universe);
  CsvWriter csv(config.output_dir / "regression_r2.csv", "ticker,r2_g_only,r2_g_and_v,abs_uplift,uplift");
  for (const auto& r : r2.rows) csv.row(r.ticker, r.r2_g_only, r.r2_g_and_v, r.r2_g_and_v - r.r2_g_only, r.uplift);
  csv.row("MEAN", std::nan(""), std::nan(""), r2.mean_abs_uplift, r2.mean_uplift);
  csv.close();
  out << "predict: top grid cell (5,5) " << fmt(top55) << ", mean R^2 uplift " << fmt(r2.mean_uplift) << " over "
      << r2.rows.size() << " tickers\n";
}

void stage_synth(const RunConfig& config, std::ostream& out) {
  const auto universe = generate_universe(*config.synth);
  write_synthetic_csv(universe, *config.synth, config.output_dir);
  out << "synth: wrote " << universe.size() << " series of " << config.synth->n_days << " days ("
      << to_string(config.synth->scenario) << ", seed " << config.synth->seed << ")\n";
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  static const std::map<std::string, Command> names = {
      {"ingest", Command::ingest}, {"distributions", Command::distributions}, {"fit", Command::fit},
      {"lmv", Command::lmv},       {"predict", Command::predict},             {"synth", Command::synth},
      {"all", Command::all}};
  const auto it = names.find(name);
  if (it == names.end()) return std::nullopt;
  return it->second;
}

std::map<std::string, std::string> read_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::map<std::string, std::string> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not 'key = value'");
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return values;
}

RunConfig make_config(Command command, const std::map<std::string, std::string>& file_values,
                      const std::map<std::string, std::string>& flag_values) {
  std::map<std::string, std::string> v = file_values;
  for (const auto& [k, val] : flag_values) v[k] = val;
  for (const auto& [k, _] : v) {
    const bool known = std::any_of(kFlags.begin(), kFlags.end(), [&](const auto& f) { return f.second == k; });
    if (!known) throw ConfigError(k + ": unknown configuration key");
  }
  auto has = [&](const char* k) { return v.count(k) > 0; };

  RunConfig c;
  if (has("output_dir")) c.output_dir = v["output_dir"];
  if (c.output_dir.empty()) throw ConfigError("output_dir: must not be empty");
  if (has("input_dir")) c.input_dir = v["input_dir"];
  if (has("g_min")) c.g_min = parse_real("g_min", v["g_min"]);
  if (!(c.g_min > 0.0)) throw ConfigError("g_min: must be positive");
  if (has("offset")) c.collapse_offset = parse_real("offset", v["offset"]);
  if (!(c.collapse_offset > 0.0)) throw ConfigError("offset: must be positive");
  if (has("bins")) c.volume_bins = parse_count("bins", v["bins"]);
  if (c.volume_bins < 3 || c.volume_bins > 10000) throw ConfigError("bins: must lie in [3, 10000]");
  if (has("fraction")) c.extreme_fraction = parse_real("fraction", v["fraction"]);
  if (!(c.extreme_fraction > 0.0 && c.extreme_fraction <= 0.5)) throw ConfigError("fraction: must lie in (0, 0.5]");
  if (has("max_lag")) c.max_lag = parse_count("max_lag", v["max_lag"]);
  if (c.max_lag > 1000) throw ConfigError("max_lag: must not exceed 1000");
  if (has("min_count")) c.min_count = parse_count("min_count", v["min_count"]);
  if (c.min_count < 2) throw ConfigError("min_count: must be at least 2");
  if (has("quintile_mode")) {
    const auto& m = v["quintile_mode"];
    if (m == "per-stock") c.quintile_mode = QuintileMode::per_stock;
    else if (m == "pooled") c.quintile_mode = QuintileMode::pooled;
    else throw ConfigError("quintile_mode: expected 'per-stock' or 'pooled'");
  }
  if (has("seed")) c.seed = parse_count("seed", v["seed"]);
  if (has("fit_v_lo")) c.fit_v_lo = parse_real("fit_v_lo", v["fit_v_lo"]);
  if (has("fit_v_hi")) c.fit_v_hi = parse_real("fit_v_hi", v["fit_v_hi"]);
  if (!(c.fit_v_lo < c.fit_v_hi)) throw ConfigError("fit_v_lo: must be below fit_v_hi");

  const bool synth_requested = has("synth_scenario") || command == Command::synth;
  if (synth_requested) {
    if (c.input_dir && command != Command::synth)
      throw ConfigError("input_dir: cannot be combined with synth_scenario");
    SynthSpec spec;
    if (has("synth_scenario")) {
      const auto s = parse_scenario(v["synth_scenario"]);
      if (!s) throw ConfigError("synth_scenario: unknown scenario '" + v["synth_scenario"] + "'");
      spec.scenario = *s;
    }
    if (has("synth_days")) spec.n_days = parse_count("synth_days", v["synth_days"]);
    if (spec.n_days < 2 || spec.n_days > 10000000) throw ConfigError("synth_days: must lie in [2, 1e7]");
    if (has("synth_tickers")) spec.n_tickers = parse_count("synth_tickers", v["synth_tickers"]);
    if (spec.n_tickers < 1 || spec.n_tickers > 1000) throw ConfigError("synth_tickers: must lie in [1, 1000]");
    if (spec.scenario == Scenario::model) {
      spec.v_lo = -2.0;
      spec.v_hi = 2.0;
    }
    if (has("synth_v_lo")) spec.v_lo = parse_real("synth_v_lo", v["synth_v_lo"]);
    if (has("synth_v_hi")) spec.v_hi = parse_real("synth_v_hi", v["synth_v_hi"]);
    spec.g_min = c.g_min;
    spec.seed = c.seed;
    spec.collapse_offset = c.collapse_offset;
    spec.extreme_fraction = std::min(c.extreme_fraction, 0.25);
    c.synth = spec;
    if (command == Command::synth) c.input_dir.reset();
  } else if (!c.input_dir) {
    throw ConfigError("input_dir: required (or select synthetic data with --synth-scenario)");
  }
  return c;
}

int run(Command command, const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) throw IoError("output_dir: cannot create " + config.output_dir.string());
    if (command == Command::synth) {
      stage_synth(config, out);
      return 0;
    }
    if (config.input_dir && !fs::is_directory(*config.input_dir))
      throw IoError("input_dir: not a readable directory: " + config.input_dir->string());
    const Data data = load_data(config);
    switch (command) {
      case Command::ingest: stage_ingest(config, data, out); break;
      case Command::distributions: stage_distributions(config, data, out); break;
      case Command::fit: stage_fit(config, data, out); break;
      case Command::lmv: stage_lmv(config, data, out); break;
      case Command::predict: stage_predict(config, data, out); break;
      case Command::all:
        stage_ingest(config, data, out);
        stage_distributions(config, data, out);
        stage_fit(config, data, out);
        stage_lmv(config, data, out);
        stage_predict(config, data, out);
        break;
      case Command::synth: break;
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == Error::Kind::io || e.kind() == Error::Kind::config ? 2 : 3;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Volume-volatility analysis: distributions, tail fit, LMV and extreme-day prediction"};
  std::string command_name;
  app.add_option("command", command_name, "ingest | distributions | fit | lmv | predict | synth | all")->required();
  std::string config_path;
  app.add_option("--config", config_path, "flat key = value config file (flags override it)");
  std::map<std::string, std::string> raw;
  std::map<std::string, CLI::Option*> options;
  for (const auto& [flag, key] : kFlags) options[key] = app.add_option(flag, raw[key]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    const auto command = parse_command(command_name);
    if (!command) throw ConfigError("command: unknown command '" + command_name + "'");
    std::map<std::string, std::string> flags;
    for (const auto& [key, opt] : options)
      if (opt->count() > 0) flags[key] = raw[key];
    const auto file_values = config_path.empty() ? std::map<std::string, std::string>{} : read_config_file(config_path);
    return run(*command, make_config(*command, file_values, flags), out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == Error::Kind::io || e.kind() == Error::Kind::config ? 2 : 3;
  }
}

}  // namespace volvol::cli
