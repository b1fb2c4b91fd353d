#include "dualdomain/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "dualdomain/codec.hpp"
#include "dualdomain/wav.hpp"

namespace dd {

namespace {

using nlohmann::json;

std::vector<double> json_doubles(const json& j, const char* key) {
  std::vector<double> out;
  for (const json& e : j.at(key)) out.push_back(e.get<double>());
  return out;
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "tight") return Algorithm::Tight;
  if (s == "general") return Algorithm::General;
  throw std::invalid_argument("grid: unknown algorithm: " + s);
}

// One input prepared for the whole grid: excerpt, frame, padded reference.
struct PreparedInput {
  std::string id;
  std::vector<double> reference;  // padded to the frame length
  FrameSpec frame;
  std::size_t sample_rate = 0;
};

std::string sanitize_csv_field(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

std::string format_double(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

ExperimentGrid parse_grid(const std::string& json_text) {
  const json j = json::parse(json_text);
  if (!j.is_object()) throw std::invalid_argument("grid: not an object");

  ExperimentGrid grid;
  for (const json& e : j.at("inputs"))
    grid.inputs.push_back(e.get<std::string>());
  grid.p_time = json_doubles(j, "p_T");
  grid.p_tf = json_doubles(j, "p_TF");
  for (const json& e : j.at("bits")) grid.bits.push_back(e.get<int>());
  for (const json& e : j.at("models"))
    grid.models.push_back(e.get<std::string>());
  for (const json& e : j.at("seeds"))
    grid.seeds.push_back(e.get<std::uint64_t>());

  grid.excerpt_seconds = j.value("excerpt_seconds", 1.0);
  grid.iterations = j.value("iterations", 300);
  grid.algorithm = algorithm_from_string(j.value("algorithm", "tight"));
  if (j.contains("frame")) {
    const json& f = j.at("frame");
    grid.window_length = f.value("window_length", grid.window_length);
    grid.hop = f.value("hop", grid.hop);
    grid.channels = f.value("channels", grid.channels);
    grid.window_family =
        window_from_string(f.value("window", std::string("sine")));
  }

  for (double p : grid.p_time)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("grid: p_T outside [0, 1]");
  for (double p : grid.p_tf)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("grid: p_TF outside [0, 1]");
  for (int b : grid.bits) make_quantizer(b);
  for (const std::string& m : grid.models)
    if (m != "analysis" && m != "synthesis" && m != "tf_direct")
      throw std::invalid_argument("grid: unknown model: " + m);
  if (!(grid.excerpt_seconds > 0.0))
    throw std::invalid_argument("grid: excerpt_seconds must be positive");
  if (grid.iterations < 1)
    throw std::invalid_argument("grid: iterations must be at least 1");
  return grid;
}

ExperimentGrid read_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_grid(text);
}

std::vector<double> select_excerpt(std::span<const double> x,
                                   std::size_t sample_rate, double seconds) {
  if (sample_rate == 0) throw std::invalid_argument("zero sample rate");
  const double silence = 1e-4;
  std::size_t start = 0;
  while (start < x.size() && std::abs(x[start]) < silence) ++start;
  if (start == x.size())
    throw std::runtime_error("input is silent; no excerpt available");

  const std::size_t want = static_cast<std::size_t>(
      std::llround(seconds * static_cast<double>(sample_rate)));
  const std::size_t len = std::min(want, x.size() - start);
  std::vector<double> out(x.begin() + static_cast<std::ptrdiff_t>(start),
                          x.begin() + static_cast<std::ptrdiff_t>(start + len));

  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  if (peak <= 0.0) throw std::runtime_error("excerpt is silent");
  for (double& v : out) v /= peak;
  return out;
}

std::vector<ResultRow> run_experiment(const ExperimentGrid& grid, int jobs) {
  // Load and prepare every input once; remember failures per input.
  std::vector<PreparedInput> prepared;
  std::vector<std::string> input_errors(grid.inputs.size());
  std::vector<std::ptrdiff_t> prepared_index(grid.inputs.size(), -1);
  for (std::size_t i = 0; i < grid.inputs.size(); ++i) {
    try {
      const WavData wav = load_wav(grid.inputs[i]);
      std::vector<double> excerpt =
          select_excerpt(wav.samples, wav.sample_rate, grid.excerpt_seconds);
      FrameSpec frame =
          make_tight_frame(grid.window_length, grid.hop, grid.channels,
                           excerpt.size(), grid.window_family);
      excerpt.resize(frame.signal_length(), 0.0);
      prepared_index[i] = static_cast<std::ptrdiff_t>(prepared.size());
      prepared.push_back({std::filesystem::path(grid.inputs[i])
                              .filename()
                              .replace_extension("")
                              .string(),
                          std::move(excerpt), std::move(frame),
                          wav.sample_rate});
    } catch (const std::exception& e) {
      input_errors[i] = e.what();
    }
  }

  struct Cell {
    std::size_t input;
    std::size_t model;
    int bits;
    double p_time, p_tf;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < grid.inputs.size(); ++i)
    for (std::size_t m = 0; m < grid.models.size(); ++m)
      for (int b : grid.bits)
        for (double pt : grid.p_time)
          for (double pf : grid.p_tf)
            for (std::uint64_t seed : grid.seeds)
              cells.push_back({i, m, b, pt, pf, seed});

  std::vector<ResultRow> rows(cells.size());
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(cells.size());

  auto run_cell = [&](std::ptrdiff_t ci) {
    const Cell& cell = cells[static_cast<std::size_t>(ci)];
    ResultRow& row = rows[static_cast<std::size_t>(ci)];
    row.signal = std::filesystem::path(grid.inputs[cell.input])
                     .filename()
                     .replace_extension("")
                     .string();
    row.p_time = cell.p_time;
    row.p_tf = cell.p_tf;
    row.bits_time = row.bits_tf = cell.bits;
    row.model = grid.models[cell.model];
    row.seed = cell.seed;
    if (prepared_index[cell.input] < 0) {
      row.status = "failed: " + input_errors[cell.input];
      return;
    }
    const PreparedInput& in =
        prepared[static_cast<std::size_t>(prepared_index[cell.input])];
    row.signal = in.id;
    try {
      const std::size_t P = in.frame.signal_length();
      const std::size_t Q = in.frame.num_coefficients();
      const double duration =
          static_cast<double>(P) / static_cast<double>(in.sample_rate);
      row.bitrate = (cell.p_time * static_cast<double>(P) * cell.bits +
                     cell.p_tf * static_cast<double>(Q) * cell.bits) /
                    duration;

      EncodeSpec espec;
      espec.p_time = cell.p_time;
      espec.p_tf = cell.p_tf;
      espec.bits_time = espec.bits_tf = cell.bits;
      espec.seed = cell.seed;
      espec.frame = &in.frame;

      const auto t0 = std::chrono::steady_clock::now();
      const EncodedPayload payload = encode(in.reference, espec);
      std::vector<double> estimate;
      if (row.model == "tf_direct") {
        estimate = tf_direct_baseline(payload);
        row.iterations = 0;
      } else {
        SolverConfig config = default_config(grid.algorithm);
        config.max_iterations = grid.iterations;
        const Model model =
            row.model == "synthesis" ? Model::Synthesis : Model::Analysis;
        SolveResult result =
            decode(payload, model, config, grid.algorithm);
        estimate = std::move(result.signal);
        row.iterations = result.report.iterations_run;
      }
      const auto t1 = std::chrono::steady_clock::now();
      row.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
      row.sdr_db = sdr(in.reference, estimate);
      row.status = "ok";
    } catch (const std::exception& e) {
      row.status = std::string("failed: ") + e.what();
    }
  };

  if (jobs > 1) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (std::ptrdiff_t ci = 0; ci < n; ++ci) run_cell(ci);
  } else {
    for (std::ptrdiff_t ci = 0; ci < n; ++ci) run_cell(ci);
  }
  return rows;
}

std::string csv_header() {
  return "signal,p_T,p_TF,b_T,b_TF,model,seed,bitrate,sdr_db,iterations,"
         "wall_time_s,status\n";
}

std::string csv_row(const ResultRow& r) {
  std::string out;
  out += sanitize_csv_field(r.signal);
  out += ',';
  out += format_double("%.6g", r.p_time);
  out += ',';
  out += format_double("%.6g", r.p_tf);
  out += ',';
  out += std::to_string(r.bits_time);
  out += ',';
  out += std::to_string(r.bits_tf);
  out += ',';
  out += sanitize_csv_field(r.model);
  out += ',';
  out += std::to_string(r.seed);
  out += ',';
  out += format_double("%.3f", r.bitrate);
  out += ',';
  out += format_double("%.6f", r.sdr_db);
  out += ',';
  out += std::to_string(r.iterations);
  out += ',';
  out += format_double("%.3f", r.wall_time_s);
  out += ',';
  out += sanitize_csv_field(r.status);
  out += '\n';
  return out;
}

std::string csv_text(std::span<const ResultRow> rows) {
  std::string out = csv_header();
  for (const ResultRow& r : rows) out += csv_row(r);
  return out;
}

void write_csv(const std::string& path, std::span<const ResultRow> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const std::string text = csv_text(rows);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace dd
