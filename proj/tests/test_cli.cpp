#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dualdomain/wav.hpp"

namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() /
          ("dd_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const {
    return (dir / name).string();
  }
};

int run(const std::string& args) {
  const std::string cmd =
      std::string(DD_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  return WEXITSTATUS(rc);
}

std::string make_wav(const Scratch& s, const std::string& name,
                     std::size_t n = 600) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = 0.7 * std::sin(0.17 * static_cast<double>(i)) +
           0.4 * std::sin(0.52 * static_cast<double>(i) + 0.8);
  const std::string path = s / name;
  dd::save_wav(path, x, 800);
  return path;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

const std::string kFrame = " --window-length 64 --hop 32 --channels 64";

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  Scratch s;
  CHECK(run("") == 2);                      // a subcommand is required
  CHECK(run("reconstruct") == 2);           // --input is required
  CHECK(run("frobnicate") == 2);            // unknown subcommand
  CHECK(run("experiment no_such_grid.json") == 2);

  // Input present but neither a payload nor any degradation flag.
  const std::string wav = make_wav(s, "in.wav");
  CHECK(run("reconstruct --input " + wav) == 2);

  // Flags out of range.
  CHECK(run("reconstruct --input " + wav + " --clip-theta 1.5") == 2);
  CHECK(run("reconstruct --input " + wav + " --quant-bits 99") == 2);
}

TEST_CASE("declip run writes output and a feasible report") {
  Scratch s;
  const std::string wav = make_wav(s, "in.wav");
  const std::string out = s / "out.wav";
  const std::string rep = s / "report.json";

  const int rc = run("reconstruct --input " + wav + " --clip-theta 0.5" +
                     " --iterations 200 --output " + out + " --report " + rep +
                     kFrame);
  CHECK(rc == 0);

  const dd::WavData reconstructed = dd::load_wav(out);
  CHECK(reconstructed.samples.size() == 600);
  CHECK(reconstructed.sample_rate == 800);

  const nlohmann::json report = nlohmann::json::parse(read_file(rep));
  CHECK(report.at("dist_time").get<double>() <= 1e-4);
  CHECK(report.at("model") == "analysis");
  CHECK(report.at("iterations_run").get<int>() == 200);
  // The clean input doubles as the reference, so both SDRs are present
  // and declipping must not fall below the clipped input's quality.
  const double in_sdr = report.at("degraded_sdr_db").get<double>();
  const double out_sdr = report.at("sdr_db").get<double>();
  CHECK(out_sdr >= in_sdr);
}

TEST_CASE("payloads round trip through the two commands") {
  Scratch s;
  const std::string wav = make_wav(s, "in.wav");
  const std::string payload = s / "p.json";
  const std::string out = s / "out.wav";

  CHECK(run("encode --input " + wav + " --payload " + payload +
            " --p-time 0.6 --bits-time 8 --excerpt-seconds 0" + kFrame) == 0);
  CHECK(fs::exists(payload));

  CHECK(run("reconstruct --input " + wav + " --payload " + payload +
            " --iterations 150 --output " + out) == 0);
  CHECK(dd::load_wav(out).samples.size() == 600);

  // Degradation flags cannot be combined with a payload.
  CHECK(run("reconstruct --input " + wav + " --payload " + payload +
            " --clip-theta 0.5") == 2);
}

TEST_CASE("experiment appends csv rows with a single header") {
  Scratch s;
  const std::string wav = make_wav(s, "tone.wav");
  const std::string grid = s / "grid.json";
  const std::string csv = s / "results.csv";
  {
    std::ofstream g(grid);
    g << R"({"inputs": ["tone.wav"], "p_T": [0.3, 0.6], "p_TF": [0.0],
            "bits": [6], "models": ["analysis"], "seeds": [5],
            "excerpt_seconds": 0.25, "iterations": 40,
            "frame": {"window_length": 64, "hop": 32, "channels": 64}})";
  }

  CHECK(run("experiment " + grid + " --output " + csv) == 0);
  std::string first = read_file(csv);
  CHECK(std::count(first.begin(), first.end(), '\n') == 3);  // header + 2

  CHECK(run("experiment " + grid + " --output " + csv) == 0);
  std::string second = read_file(csv);
  CHECK(std::count(second.begin(), second.end(), '\n') == 5);  // appended
  CHECK(second.rfind("signal,") == 0);  // exactly one header, at the top
}
