#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "volvol/cli.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "volvol");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = volvol::cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("volvol_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<std::string> keys(const json& j) {
  std::vector<std::string> k;
  for (auto it = j.begin(); it != j.end(); ++it) k.push_back(it.key());
  return k;
}

bool same_tree(const fs::path& a, const fs::path& b) {
  std::vector<fs::path> fa, fb;
  for (const auto& e : fs::recursive_directory_iterator(a)) fa.push_back(fs::relative(e.path(), a));
  for (const auto& e : fs::recursive_directory_iterator(b)) fb.push_back(fs::relative(e.path(), b));
  std::sort(fa.begin(), fa.end());
  std::sort(fb.begin(), fb.end());
  if (fa != fb) return false;
  for (const auto& f : fa)
    if (fs::is_regular_file(a / f) && slurp(a / f) != slurp(b / f)) return false;
  return true;
}

}  // namespace

TEST_CASE("synth is deterministic") {
  const auto a = fresh("synth_a"), b = fresh("synth_b");
  REQUIRE(run_cli({"synth", "--seed", "7", "--synth-days", "300", "--synth-tickers", "3", "--output-dir", a}).code == 0);
  REQUIRE(run_cli({"synth", "--seed", "7", "--synth-days", "300", "--synth-tickers", "3", "--output-dir", b}).code == 0);
  CHECK(fs::exists(a / "S000.csv"));
  CHECK(fs::exists(a / "synthetic_meta.json"));
  CHECK(same_tree(a, b));
  const auto c = fresh("synth_c");
  REQUIRE(run_cli({"synth", "--seed", "8", "--synth-days", "300", "--synth-tickers", "3", "--output-dir", c}).code == 0);
  CHECK_FALSE(same_tree(a, c));
}

TEST_CASE("missing input directory exits 2 naming input_dir") {
  const auto r = run_cli({"all", "--input-dir", "/nonexistent/volvol", "--output-dir", fresh("missing")});
  CHECK(r.code == 2);
  CHECK(r.err.find("input_dir") != std::string::npos);
  const auto none = run_cli({"fit", "--output-dir", fresh("none")});
  CHECK(none.code == 2);
  CHECK(none.err.find("input_dir") != std::string::npos);
}

TEST_CASE("config errors exit 2 and name the field") {
  const auto out = fresh("cfg");
  auto r = run_cli({"fit", "--synth-scenario", "model", "--g-min", "abc", "--output-dir", out});
  CHECK(r.code == 2);
  CHECK(r.err.find("g_min") != std::string::npos);
  r = run_cli({"fit", "--synth-scenario", "model", "--fraction", "0.9", "--output-dir", out});
  CHECK(r.code == 2);
  CHECK(r.err.find("fraction") != std::string::npos);
  r = run_cli({"fit", "--synth-scenario", "nope", "--output-dir", out});
  CHECK(r.code == 2);
  CHECK(r.err.find("synth_scenario") != std::string::npos);
  r = run_cli({"frobnicate", "--synth-scenario", "model"});
  CHECK(r.code == 2);
  r = run_cli({"fit", "--no-such-flag", "1"});
  CHECK(r.code == 2);
  r = run_cli({"fit", "--synth-scenario", "iid", "--quintile-mode", "sideways", "--output-dir", out});
  CHECK(r.code == 2);
  CHECK(r.err.find("quintile_mode") != std::string::npos);
  r = run_cli({"fit", "--synth-scenario", "iid", "--input-dir", "/tmp", "--output-dir", out});
  CHECK(r.code == 2);
}

TEST_CASE("config file values are overridden by flags") {
  const auto dir = fresh("cfgfile");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "run.conf");
    f << "# comment\nsynth_scenario = model\nsynth_days = 400\nsynth_tickers = 2\ng_min = 0.2\noutput_dir = "
      << (dir / "from_file").string() << "\n";
  }
  auto r = run_cli({"fit", "--config", (dir / "run.conf").string(), "--g-min", "0.15"});
  REQUIRE(r.code == 0);
  const auto rep = read_json(dir / "from_file" / "fit_report.json");
  CHECK(rep["g_min"].get<double>() == 0.15);

  {
    std::ofstream f(dir / "bad.conf");
    f << "colour = blue\n";
  }
  r = run_cli({"fit", "--config", (dir / "bad.conf").string(), "--synth-scenario", "model"});
  CHECK(r.code == 2);
  CHECK(r.err.find("colour") != std::string::npos);
  r = run_cli({"fit", "--config", (dir / "absent.conf").string()});
  CHECK(r.code == 2);
}

TEST_CASE("analysis errors exit 3") {
  auto r = run_cli({"fit", "--synth-scenario", "iid", "--synth-days", "200", "--synth-tickers", "1", "--g-min", "1000",
                    "--output-dir", fresh("notail")});
  CHECK(r.code == 3);
  CHECK(r.err.find("no tail samples") != std::string::npos);

  const auto in = fresh("flat_in");
  fs::create_directories(in);
  {
    std::ofstream f(in / "FLAT.csv");
    f << "date,close,volume\n2020-01-02,10,100\n2020-01-03,10,200\n2020-01-06,10,300\n";
  }
  r = run_cli({"ingest", "--input-dir", in, "--output-dir", fresh("flat_out")});
  CHECK(r.code == 3);
}

TEST_CASE("malformed input never crashes") {
  const auto in = fresh("junk_in");
  fs::create_directories(in);
  {
    std::ofstream f(in / "JUNK.csv", std::ios::binary);
    f << "date,close,volume\n\x01\x02garbage,,\n2020-01-03,1e999,5\n,,\n";
  }
  const auto r = run_cli({"all", "--input-dir", in, "--output-dir", fresh("junk_out")});
  CHECK((r.code == 2 || r.code == 3));
  CHECK(r.err.rfind("error: ", 0) == 0);
}

TEST_CASE("run all: schemas of every output") {
  const auto out = fresh("schema");
  const auto r = run_cli({"all", "--synth-scenario", "model", "--synth-days", "2000", "--synth-tickers", "10",
                          "--max-lag", "3", "--output-dir", out});
  REQUIRE(r.code == 0);
  for (const char* stage : {"ingest:", "distributions:", "fit:", "lmv:", "predict:"})
    CHECK(r.out.find(stage) != std::string::npos);

  const auto fit = read_json(out / "fit_report.json");
  for (const char* k : {"alpha", "beta", "a", "b", "g_min", "n_tail", "nll"}) CHECK(fit.contains(k));
  CHECK(std::abs(fit["alpha"].get<double>() - 0.4) < 0.3);
  CHECK(fs::exists(out / "fit_report.txt"));

  CHECK(keys(read_json(out / "validation_report.json")) ==
        std::vector<std::string>{"source", "scenario", "seed", "n_series", "total_rows_retained", "tickers",
                                 "excluded_from_normalization"});
  const auto collapse = read_json(out / "collapse_report.json");
  for (const char* k : {"offset", "pairwise_ks", "collapse_score", "unscaled_score", "normality_ks"})
    CHECK(collapse.contains(k));

  CHECK(first_line(out / "volume_pdf.csv") == "bin_center,density,count");
  CHECK(first_line(out / "volatility_pdf.csv") == "bin_center,density,count");
  CHECK(first_line(out / "conditional_pdf_bin15.csv") == "bin_center,density,count");
  CHECK(first_line(out / "density_grid.csv") == "v,g,density");
  CHECK(first_line(out / "lmv_lag0_S000.csv") == "bin_center,lmv,date");
  CHECK(fs::exists(out / "lmv_lag3_S009.csv"));
  CHECK(first_line(out / "lag_profile.csv") == "lag,mean_rho_raw,std_rho_raw,mean_rho_lmv,std_rho_lmv,n_tickers");
  CHECK(first_line(out / "regression_r2.csv") == "ticker,r2_g_only,r2_g_and_v,abs_uplift,uplift");
  CHECK(first_line(out / "quintile_grid_top.csv") ==
        "volume_quintile,volatility_quintile,relative_probability,cell_count,event_count");
  for (const char* c : {"volume", "volatility"})
    for (const char* s : {"top", "bottom"}) {
      const auto q = read_json(out / (std::string("quintile_vec_") + c + "_" + s + ".json"));
      CHECK(q["mean"].size() == 5);
      CHECK(q["std"].size() == 5);
    }
  const auto grid = read_json(out / "quintile_grid_bottom.json");
  CHECK(grid["cells"].size() == 5);
  CHECK(grid["cells"][0].size() == 5);
  CHECK(grid.contains("cell_counts"));
}

TEST_CASE("file round trip: synth files through the full pipeline, twice") {
  const auto data = fresh("rt_data");
  REQUIRE(run_cli({"synth", "--synth-scenario", "iid", "--synth-days", "1500", "--synth-tickers", "12", "--output-dir",
                   data})
              .code == 0);
  const auto a = fresh("rt_a"), b = fresh("rt_b");
  const auto ra = run_cli({"all", "--input-dir", data, "--seed", "7", "--max-lag", "2", "--output-dir", a});
  const auto rb = run_cli({"all", "--input-dir", data, "--seed", "7", "--max-lag", "2", "--output-dir", b});
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(ra.out == rb.out);
  CHECK(same_tree(a, b));
  const auto v = read_json(a / "validation_report.json");
  CHECK(v["n_series"].get<int>() == 12);
  CHECK(v["tickers"][0]["rows_read"].get<int>() == 1501);
}
