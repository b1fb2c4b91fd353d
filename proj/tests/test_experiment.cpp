#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "dualdomain/experiment.hpp"
#include "dualdomain/wav.hpp"

using namespace dd;
namespace fs = std::filesystem;

namespace {

const std::string kGridJson = R"({
  "inputs": ["%WAV%"],
  "p_T": [0.2, 0.5],
  "p_TF": [0.0],
  "bits": [4, 8],
  "models": ["analysis"],
  "seeds": [11],
  "excerpt_seconds": 0.25,
  "iterations": 50,
  "frame": {"window_length": 64, "hop": 32, "channels": 64}
})";

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("dd_exp_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
};

std::string write_tone_wav(const fs::path& dir) {
  const std::size_t rate = 800, n = 400;
  std::vector<double> x(n, 0.0);
  for (std::size_t i = 50; i < n; ++i)
    x[i] = 0.8 * std::sin(0.21 * static_cast<double>(i)) +
           0.3 * std::sin(0.043 * static_cast<double>(i) + 1.0);
  const std::string path = (dir / "tone.wav").string();
  save_wav(path, x, rate);
  return path;
}

std::string grid_with(const std::string& wav) {
  std::string text = kGridJson;
  text.replace(text.find("%WAV%"), 5, wav);
  return text;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i)
    if (i == line.size() || line[i] == ',') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  return out;
}

}  // namespace

TEST_CASE("grid json parses fields and defaults") {
  const ExperimentGrid g = parse_grid(grid_with("a.wav"));
  CHECK(g.inputs == std::vector<std::string>{"a.wav"});
  CHECK(g.p_time == std::vector<double>{0.2, 0.5});
  CHECK(g.p_tf == std::vector<double>{0.0});
  CHECK(g.bits == std::vector<int>{4, 8});
  CHECK(g.models == std::vector<std::string>{"analysis"});
  CHECK(g.seeds == std::vector<std::uint64_t>{11});
  CHECK(g.excerpt_seconds == 0.25);
  CHECK(g.iterations == 50);
  CHECK(g.window_length == 64);
  CHECK(g.hop == 32);

  CHECK_THROWS(parse_grid("{}"));          // required keys missing
  CHECK_THROWS(parse_grid("not json"));
}

TEST_CASE("excerpt selection skips silence and normalizes the peak") {
  std::vector<double> x(500, 0.0);
  for (std::size_t i = 0; i < 100; ++i) x[i] = 5e-5;  // below the gate
  for (std::size_t i = 100; i < 500; ++i)
    x[i] = 0.5 * std::sin(0.3 * static_cast<double>(i));

  const auto e = select_excerpt(x, 800, 0.25);
  REQUIRE(e.size() == 200);
  double peak = 0.0, raw_peak = 0.0;
  for (double v : e) peak = std::max(peak, std::abs(v));
  for (std::size_t i = 100; i < 300; ++i)
    raw_peak = std::max(raw_peak, std::abs(x[i]));
  CHECK(std::abs(peak - 1.0) <= 1e-9);
  for (std::size_t i = 0; i < e.size(); ++i)  // starts at the first loud sample
    CHECK(e[i] == x[100 + i] / raw_peak);

  CHECK_THROWS(select_excerpt(std::vector<double>(64, 0.0), 800, 0.25));
}

TEST_CASE("csv schema is fixed") {
  CHECK(csv_header() ==
        "signal,p_T,p_TF,b_T,b_TF,model,seed,bitrate,sdr_db,iterations,"
        "wall_time_s,status\n");

  ResultRow r;
  r.signal = "s,with,commas";
  r.model = "analysis";
  const auto fields = split_fields(csv_row(r));
  REQUIRE(fields.size() == 12);
  CHECK(fields[0] == "s;with;commas");  // separators sanitized
  CHECK(fields[5] == "analysis");
}

TEST_CASE("grid run produces one row per cell with exact bitrates") {
  Scratch scratch;
  const std::string wav = write_tone_wav(scratch.dir);
  const ExperimentGrid grid = parse_grid(grid_with(wav));

  const auto rows = run_experiment(grid);
  REQUIRE(rows.size() == 4);  // 2 p_T x 2 bits

  // 0.25 s at 800 Hz = 200 samples, padded to 224 by the 32-hop frame.
  const double P = 224, Q = 448, duration = P / 800.0;
  std::size_t i = 0;
  for (int b : {4, 8})
    for (double pt : {0.2, 0.5}) {
      const ResultRow& r = rows[i++];
      CHECK(r.status == "ok");
      CHECK(r.signal == "tone");
      CHECK(r.bits_time == b);
      CHECK(r.p_time == pt);
      CHECK(r.bitrate == doctest::Approx(pt * P * b / duration).epsilon(1e-12));
      CHECK(r.iterations == 50);
      CHECK(std::isfinite(r.sdr_db));
    }
}

TEST_CASE("empty grid yields a header-only csv") {
  ExperimentGrid grid;  // no inputs at all
  const auto rows = run_experiment(grid);
  CHECK(rows.empty());
  CHECK(csv_text(rows) == csv_header());
}

TEST_CASE("runs are deterministic apart from timing") {
  Scratch scratch;
  const std::string wav = write_tone_wav(scratch.dir);
  const ExperimentGrid grid = parse_grid(grid_with(wav));

  const auto a = run_experiment(grid, 1);
  const auto b = run_experiment(grid, 2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto fa = split_fields(csv_row(a[i])), fb = split_fields(csv_row(b[i]));
    fa[10] = fb[10] = "";  // wall_time_s
    CHECK(fa == fb);
  }
}

TEST_CASE("bad inputs mark their rows failed and the run continues") {
  Scratch scratch;
  const std::string wav = write_tone_wav(scratch.dir);
  ExperimentGrid grid = parse_grid(grid_with(wav));
  grid.inputs.insert(grid.inputs.begin(), "no_such_file.wav");

  const auto rows = run_experiment(grid);
  REQUIRE(rows.size() == 8);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(rows[i].status.rfind("failed:", 0) == 0);
  for (std::size_t i = 4; i < 8; ++i) CHECK(rows[i].status == "ok");
}

TEST_CASE("tf_direct rows skip the solver") {
  Scratch scratch;
  const std::string wav = write_tone_wav(scratch.dir);
  ExperimentGrid grid = parse_grid(grid_with(wav));
  grid.models = {"tf_direct"};
  grid.p_time = {0.0};
  grid.p_tf = {0.3};
  grid.bits = {8};

  const auto rows = run_experiment(grid);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].status == "ok");
  CHECK(rows[0].iterations == 0);
}

TEST_CASE("csv files are written whole") {
  Scratch scratch;
  ResultRow r;
  r.signal = "x";
  r.model = "analysis";
  const std::string path = (scratch.dir / "out.csv").string();
  write_csv(path, std::vector<ResultRow>{r});
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line + "\n" == csv_header());
  std::getline(in, line);
  CHECK(line + "\n" == csv_row(r));
}
