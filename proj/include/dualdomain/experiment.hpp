#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "dualdomain/frame.hpp"
#include "dualdomain/solver.hpp"

namespace dd {

// Cartesian grid over codec settings; one row per
// input x model x bits x p_time x p_tf x seed.
struct ExperimentGrid {
  std::vector<std::string> inputs;  // WAV paths
  std::vector<double> p_time;
  std::vector<double> p_tf;
  std::vector<int> bits;            // per sample and per coefficient part
  std::vector<std::string> models;  // "analysis", "synthesis", "tf_direct"
  std::vector<std::uint64_t> seeds;
  double excerpt_seconds = 1.0;
  int iterations = 300;
  Algorithm algorithm = Algorithm::Tight;
  std::size_t window_length = 2048;
  std::size_t hop = 1024;
  std::size_t channels = 2048;
  Window window_family = Window::Sine;
};

struct ResultRow {
  std::string signal;
  double p_time = 0.0, p_tf = 0.0;
  int bits_time = 0, bits_tf = 0;
  std::string model;
  std::uint64_t seed = 0;
  double bitrate = 0.0;  // bits per second of audio
  double sdr_db = 0.0;
  int iterations = 0;
  double wall_time_s = 0.0;
  std::string status = "ok";  // or "failed: <reason>"
};

ExperimentGrid parse_grid(const std::string& json_text);
ExperimentGrid read_grid(const std::string& path);

// First excerpt after leading silence (|x| < 1e-4), peak-normalized so
// max |excerpt| is exactly 1. Throws if the remainder is silent.
std::vector<double> select_excerpt(std::span<const double> x,
                                   std::size_t sample_rate, double seconds);

// Runs every grid cell; failed cells get a status note and the run
// continues. Cells are independent; jobs > 1 runs them concurrently with
// each solve single-threaded. Row order is the fixed nesting order and does
// not depend on jobs.
std::vector<ResultRow> run_experiment(const ExperimentGrid& grid,
                                      int jobs = 1);

std::string csv_header();
std::string csv_row(const ResultRow& row);
std::string csv_text(std::span<const ResultRow> rows);
void write_csv(const std::string& path, std::span<const ResultRow> rows);

}  // namespace dd
