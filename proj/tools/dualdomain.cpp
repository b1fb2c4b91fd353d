// Command-line front end: payload encoding, single-file reconstruction,
// and the grid experiment harness.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dualdomain/codec.hpp"
#include "dualdomain/degradation.hpp"
#include "dualdomain/experiment.hpp"
#include "dualdomain/feasible.hpp"
#include "dualdomain/frame.hpp"
#include "dualdomain/payload_io.hpp"
#include "dualdomain/rng.hpp"
#include "dualdomain/solver.hpp"
#include "dualdomain/wav.hpp"

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct FrameFlags {
  std::size_t window_length = 2048;
  std::size_t hop = 1024;
  std::size_t channels = 2048;
  std::string window = "sine";

  void attach(CLI::App* cmd) {
    cmd->add_option("--window-length", window_length, "Window length")
        ->capture_default_str();
    cmd->add_option("--hop", hop, "Hop between frames")->capture_default_str();
    cmd->add_option("--channels", channels, "Frequency channels")
        ->capture_default_str();
    cmd->add_option("--window", window, "Window family")
        ->check(CLI::IsMember({"sine", "hann", "rect"}))
        ->capture_default_str();
  }

  dd::FrameSpec make(std::size_t signal_length) const {
    return dd::make_tight_frame(window_length, hop, channels, signal_length,
                                dd::window_from_string(window));
  }
};

struct EncodeArgs {
  std::string input;
  std::string payload_path;
  double p_time = 0.2;
  double p_tf = 0.0;
  int bits_time = 16;
  int bits_tf = 16;
  std::uint64_t seed = 0;
  double excerpt_seconds = 0.0;  // 0 = whole file
  FrameFlags frame;
};

struct ReconstructArgs {
  std::string input;
  std::string payload_path;
  double mask_keep = 1.0;
  double clip_theta = 0.0;  // 0 = off
  int quant_bits = 0;       // 0 = off
  double tf_keep = 0.0;     // 0 = off
  int tf_quant_bits = 0;    // 0 = exact
  std::string model = "analysis";
  std::string algorithm = "tight";
  std::string mode = "consistent";
  int iterations = 300;
  double tolerance = 0.0;
  std::uint64_t seed = 0;
  std::string output;
  std::string report_path;
  std::string reference;
  FrameFlags frame;
};

struct ExperimentArgs {
  std::string grid_path;
  std::string output = "results.csv";
  int jobs = 1;
};

int default_jobs() {
  const char* env = std::getenv("DUALDOMAIN_JOBS");
  if (env == nullptr) return 1;
  const int v = std::atoi(env);
  return v >= 1 ? v : 1;
}

dd::Model model_from(const std::string& s) {
  return s == "synthesis" ? dd::Model::Synthesis : dd::Model::Analysis;
}

dd::Algorithm algorithm_from(const std::string& s) {
  return s == "general" ? dd::Algorithm::General : dd::Algorithm::Tight;
}

dd::Mode mode_from(const std::string& s) {
  return s == "inconsistent" ? dd::Mode::Inconsistent : dd::Mode::Consistent;
}

std::vector<double> peak_normalized(std::vector<double> x) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak <= 0.0) throw std::runtime_error("input is silent");
  for (double& v : x) v /= peak;
  return x;
}

int run_encode(const EncodeArgs& a) {
  const dd::WavData wav = dd::load_wav(a.input);
  std::vector<double> x =
      a.excerpt_seconds > 0.0
          ? dd::select_excerpt(wav.samples, wav.sample_rate, a.excerpt_seconds)
          : peak_normalized(wav.samples);

  const dd::FrameSpec frame = a.frame.make(x.size());
  x.resize(frame.signal_length(), 0.0);

  dd::EncodeSpec spec;
  spec.frame = &frame;
  spec.p_time = a.p_time;
  spec.p_tf = a.p_tf;
  spec.bits_time = a.bits_time;
  spec.bits_tf = a.bits_tf;
  spec.seed = a.seed;
  const dd::EncodedPayload payload = dd::encode(x, spec);
  dd::write_payload(a.payload_path, payload);

  const double duration = static_cast<double>(frame.signal_length()) /
                          static_cast<double>(wav.sample_rate);
  std::cout << "wrote " << a.payload_path << ": " << payload.bits << " bits, "
            << static_cast<double>(payload.bits) / duration << " bits/s\n";
  return 0;
}

// Degrade the padded input per the flags: drop samples, clip, quantize.
// Returns per-sample records; bounds account for the composed pipeline
// (a quantizer cell touching a clipping rail extends to infinity there).
std::vector<dd::Record> degrade_time(std::span<const double> x,
                                     const ReconstructArgs& a) {
  const std::size_t P = x.size();
  std::vector<char> kept(P, 1);
  if (a.mask_keep < 1.0) {
    const std::size_t keep_count = static_cast<std::size_t>(
        std::llround(a.mask_keep * static_cast<double>(P)));
    std::vector<std::size_t> order(P);
    std::iota(order.begin(), order.end(), std::size_t{0});
    dd::Rng rng(a.seed);
    rng.shuffle(order);
    std::fill(kept.begin(), kept.end(), char{0});
    for (std::size_t k = 0; k < keep_count; ++k) kept[order[k]] = 1;
  }

  const bool clip_on = a.clip_theta > 0.0;
  const bool quant_on = a.quant_bits > 0;
  dd::QuantizerSpec qspec;
  if (quant_on) qspec = dd::make_quantizer(a.quant_bits);

  std::vector<dd::Record> records(P);
  for (std::size_t i = 0; i < P; ++i) {
    dd::Record& r = records[i];
    if (!kept[i]) {
      r = {dd::Tag::Missing, 0.0, -kInf, kInf};
      continue;
    }
    const double v = x[i];
    r = {dd::Tag::Reliable, v, v, v};
    if (clip_on) {
      if (v > a.clip_theta)
        r = {dd::Tag::ClippedHigh, a.clip_theta, a.clip_theta, kInf};
      else if (v < -a.clip_theta)
        r = {dd::Tag::ClippedLow, -a.clip_theta, -kInf, -a.clip_theta};
    }
    if (quant_on) {
      const dd::QuantizedValue qv = dd::quantize(r.observed, qspec);
      double lo = qv.lower;
      double hi = qv.upper;
      if (clip_on) {
        if (hi >= a.clip_theta) hi = kInf;
        if (lo <= -a.clip_theta) lo = -kInf;
      }
      r = {dd::Tag::Quantized, qv.level, lo, hi};
    }
  }
  return records;
}

int run_reconstruct(const ReconstructArgs& a) {
  const dd::WavData wav = dd::load_wav(a.input);
  const dd::Model model = model_from(a.model);
  const dd::Algorithm algorithm = algorithm_from(a.algorithm);

  dd::SolverConfig config = dd::default_config(algorithm);
  config.max_iterations = a.iterations;
  config.rel_tolerance = a.tolerance;

  dd::SolveResult result;
  std::vector<double> degraded;  // flag mode only
  if (!a.payload_path.empty()) {
    const dd::EncodedPayload payload = dd::read_payload(a.payload_path);
    result = dd::decode(payload, model, config, algorithm);
  } else {
    std::vector<double> x = wav.samples;
    const dd::FrameSpec frame = a.frame.make(x.size());
    x.resize(frame.signal_length(), 0.0);

    dd::ProblemSpec problem;
    problem.frame = &frame;
    problem.model = model;
    problem.mode = mode_from(a.mode);
    const std::vector<dd::Record> records = degrade_time(x, a);
    problem.box_time = dd::build_box(records);
    if (a.tf_keep > 0.0) {
      const std::vector<std::complex<double>> c = dd::analyze(frame, x);
      problem.box_tf = dd::build_tf_box(
          dd::encode_tf(frame, c, a.tf_keep, a.tf_quant_bits).records);
    }

    degraded.resize(frame.signal_length());
    for (std::size_t i = 0; i < degraded.size(); ++i)
      degraded[i] = records[i].observed;

    result = algorithm == dd::Algorithm::Tight
                 ? dd::solve_tight(problem, config, degraded)
                 : dd::solve_general(problem, config, degraded);
  }

  const std::size_t n = std::min(wav.samples.size(), result.signal.size());
  if (!a.output.empty())
    dd::save_wav(a.output, {result.signal.data(), n}, wav.sample_rate);

  // Flag mode degrades the input itself, so the input doubles as the
  // clean reference unless one is given explicitly.
  std::vector<double> reference;
  if (!a.reference.empty())
    reference = dd::load_wav(a.reference).samples;
  else if (a.payload_path.empty())
    reference = wav.samples;

  nlohmann::json report;
  report["model"] = a.model;
  report["algorithm"] = a.algorithm;
  report["iterations_run"] = result.report.iterations_run;
  report["final_primal_change"] = result.report.final_primal_change;
  report["dist_time"] = result.report.dist_time;
  report["dist_tf"] = result.report.dist_tf;
  report["objective"] = result.report.objective;
  if (!reference.empty()) {
    const std::size_t m = std::min(reference.size(), result.signal.size());
    const std::span<const double> ref(reference.data(), m);
    report["sdr_db"] = dd::sdr(ref, {result.signal.data(), m});
    if (!degraded.empty())
      report["degraded_sdr_db"] = dd::sdr(ref, {degraded.data(), m});
  }
  if (!a.report_path.empty()) {
    std::ofstream out(a.report_path, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot open for writing: " + a.report_path);
    out << report.dump(2) << '\n';
  }

  std::cout << "iterations " << result.report.iterations_run << "  objective "
            << result.report.objective << "  dist_T "
            << result.report.dist_time << "  dist_TF "
            << result.report.dist_tf;
  if (report.contains("sdr_db"))
    std::cout << "  sdr_db " << report["sdr_db"].get<double>();
  std::cout << '\n';
  return 0;
}

int run_experiment(const ExperimentArgs& a) {
  dd::ExperimentGrid grid = dd::read_grid(a.grid_path);
  const std::filesystem::path base =
      std::filesystem::path(a.grid_path).parent_path();
  for (std::string& input : grid.inputs) {
    const std::filesystem::path p(input);
    if (p.is_relative()) input = (base / p).string();
  }

  const std::vector<dd::ResultRow> rows = dd::run_experiment(grid, a.jobs);

  bool need_header = true;
  {
    std::error_code ec;
    const auto size = std::filesystem::file_size(a.output, ec);
    need_header = ec || size == 0;
  }
  std::ofstream out(a.output, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot open for writing: " + a.output);
  if (need_header) out << dd::csv_header();
  for (const dd::ResultRow& row : rows) out << dd::csv_row(row);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + a.output);

  const std::size_t failed = static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(),
                    [](const dd::ResultRow& r) { return r.status != "ok"; }));
  std::cout << rows.size() << " rows -> " << a.output;
  if (failed > 0) std::cout << " (" << failed << " failed)";
  std::cout << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audio reconstruction from partial time and time-frequency "
               "observations"};
  app.require_subcommand(1);

  EncodeArgs enc;
  CLI::App* cmd_encode = app.add_subcommand(
      "encode", "Degrade a WAV into a constraint payload file");
  cmd_encode->add_option("--input", enc.input, "Input WAV")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_encode->add_option("--payload", enc.payload_path, "Output payload path")
      ->required();
  cmd_encode->add_option("--p-time", enc.p_time, "Fraction of samples kept")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd_encode
      ->add_option("--p-tf", enc.p_tf, "Fraction of coefficient parts kept")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd_encode->add_option("--bits-time", enc.bits_time, "Sample bit depth")
      ->check(CLI::Range(1, 52))
      ->capture_default_str();
  cmd_encode->add_option("--bits-tf", enc.bits_tf, "Coefficient bit depth")
      ->check(CLI::Range(1, 52))
      ->capture_default_str();
  cmd_encode->add_option("--seed", enc.seed, "Mask seed")
      ->capture_default_str();
  cmd_encode
      ->add_option("--excerpt-seconds", enc.excerpt_seconds,
                   "Encode only this many seconds (0 = whole file)")
      ->check(CLI::Range(0.0, 3600.0))
      ->capture_default_str();
  enc.frame.attach(cmd_encode);

  ReconstructArgs rec;
  CLI::App* cmd_reconstruct = app.add_subcommand(
      "reconstruct", "Reconstruct a signal from a payload or by degrading "
                     "the input with the given flags");
  cmd_reconstruct->add_option("--input", rec.input, "Input WAV")
      ->required()
      ->check(CLI::ExistingFile);
  CLI::Option* payload_opt =
      cmd_reconstruct
          ->add_option("--payload", rec.payload_path, "Payload file to decode")
          ->check(CLI::ExistingFile);
  CLI::Option* mask_opt =
      cmd_reconstruct
          ->add_option("--mask-keep", rec.mask_keep,
                       "Fraction of samples kept by a random mask")
          ->check(CLI::Range(0.0, 1.0))
          ->capture_default_str();
  CLI::Option* clip_opt =
      cmd_reconstruct
          ->add_option("--clip-theta", rec.clip_theta,
                       "Clip the input at this magnitude (0 = off)")
          ->check(CLI::Range(0.0, 1.0))
          ->capture_default_str();
  CLI::Option* quant_opt =
      cmd_reconstruct
          ->add_option("--quant-bits", rec.quant_bits,
                       "Quantize kept samples to this depth (0 = off)")
          ->check(CLI::Range(0, 52))
          ->capture_default_str();
  CLI::Option* tf_keep_opt =
      cmd_reconstruct
          ->add_option("--tf-keep", rec.tf_keep,
                       "Fraction of coefficient parts observed (0 = off)")
          ->check(CLI::Range(0.0, 1.0))
          ->capture_default_str();
  CLI::Option* tf_quant_opt =
      cmd_reconstruct
          ->add_option("--tf-quant-bits", rec.tf_quant_bits,
                       "Quantize observed coefficients (0 = exact)")
          ->check(CLI::Range(0, 52))
          ->capture_default_str();
  payload_opt->excludes(mask_opt, clip_opt, quant_opt, tf_keep_opt,
                        tf_quant_opt);
  cmd_reconstruct->add_option("--model", rec.model, "Sparsity model")
      ->check(CLI::IsMember({"analysis", "synthesis"}))
      ->capture_default_str();
  cmd_reconstruct->add_option("--algorithm", rec.algorithm, "Solver variant")
      ->check(CLI::IsMember({"tight", "general"}))
      ->capture_default_str();
  cmd_reconstruct
      ->add_option("--mode", rec.mode,
                   "Hard constraints or penalized distances")
      ->check(CLI::IsMember({"consistent", "inconsistent"}))
      ->capture_default_str();
  cmd_reconstruct->add_option("--iterations", rec.iterations, "Iteration cap")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  cmd_reconstruct
      ->add_option("--tolerance", rec.tolerance,
                   "Relative-change stop (0 = run all iterations)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd_reconstruct->add_option("--seed", rec.seed, "Mask seed")
      ->capture_default_str();
  cmd_reconstruct->add_option("--output", rec.output, "Reconstructed WAV");
  cmd_reconstruct->add_option("--report", rec.report_path, "JSON report path");
  cmd_reconstruct
      ->add_option("--reference", rec.reference,
                   "Clean reference WAV for SDR")
      ->check(CLI::ExistingFile);
  rec.frame.attach(cmd_reconstruct);

  ExperimentArgs exp;
  exp.jobs = default_jobs();
  CLI::App* cmd_experiment = app.add_subcommand(
      "experiment", "Run an encode/decode grid and append CSV rows");
  cmd_experiment->add_option("grid", exp.grid_path, "Grid config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_experiment->add_option("--output,-o", exp.output, "CSV output path")
      ->capture_default_str();
  cmd_experiment
      ->add_option("--jobs", exp.jobs,
                   "Concurrent grid cells (default: DUALDOMAIN_JOBS or 1)")
      ->check(CLI::Range(1, 1024));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help exits cleanly
  }

  if (cmd_reconstruct->parsed() && rec.payload_path.empty() &&
      rec.mask_keep >= 1.0 && rec.clip_theta <= 0.0 && rec.quant_bits == 0 &&
      rec.tf_keep <= 0.0) {
    std::cerr << "reconstruct: nothing to do; give --payload or at least one "
                 "degradation flag\n";
    return 2;
  }

  try {
    if (cmd_encode->parsed()) return run_encode(enc);
    if (cmd_reconstruct->parsed()) return run_reconstruct(rec);
    return run_experiment(exp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
