// Exports the shared solver test instances, with dense operator matrices,
// for the offline convex-programming oracle (scripts/solver_oracle.py).

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "support/oracles.hpp"
#include "support/test_instances.hpp"

namespace {

using nlohmann::json;

json bound(double v) {
  if (std::isinf(v)) return nullptr;  // null = unconstrained side
  return v;
}

json bounds(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(bound(x));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const int count = argc > 1 ? std::atoi(argv[1]) : 50;
  const std::string out_path = argc > 2 ? argv[2] : "instances.json";

  json root;
  const instances::GenericInstance g = instances::make_generic_instance();
  root["generic"] = {{"L", g.L},
                     {"lo", g.lo},
                     {"hi", g.hi},
                     {"dim", g.lo.size()}};

  json arr = json::array();
  for (int k = 0; k < count; ++k) {
    const instances::SolverInstance inst =
        instances::make_instance(1000 + static_cast<std::uint64_t>(k));
    const dd::FrameSpec frame = inst.frame();
    const auto A = oracle::dense_analysis_matrix(frame);

    json j;
    j["seed"] = 1000 + k;
    j["P"] = frame.signal_length();
    j["Q"] = frame.num_coefficients();
    j["weights"] = inst.weights;
    j["time_lo"] = bounds(inst.box_time.lower);
    j["time_hi"] = bounds(inst.box_time.upper);
    if (!inst.box_tf.re_lower.empty()) {
      j["tf_re_lo"] = bounds(inst.box_tf.re_lower);
      j["tf_re_hi"] = bounds(inst.box_tf.re_upper);
      j["tf_im_lo"] = bounds(inst.box_tf.im_lower);
      j["tf_im_hi"] = bounds(inst.box_tf.im_upper);
    }
    json a_re = json::array(), a_im = json::array();
    for (const auto& row : A) {
      json r_re = json::array(), r_im = json::array();
      for (const std::complex<double>& v : row) {
        r_re.push_back(v.real());
        r_im.push_back(v.imag());
      }
      a_re.push_back(std::move(r_re));
      a_im.push_back(std::move(r_im));
    }
    j["A_re"] = std::move(a_re);
    j["A_im"] = std::move(a_im);
    arr.push_back(std::move(j));
  }
  root["instances"] = std::move(arr);

  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open " << out_path << "\n";
    return 1;
  }
  out << root.dump() << "\n";
  std::cout << "wrote " << out_path << " (" << count << " instances)\n";
  return 0;
}
