#include "dualdomain/payload_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace dd {

namespace {

using nlohmann::json;

constexpr int kPayloadVersion = 1;
constexpr double kInf = std::numeric_limits<double>::infinity();

json bound_to_json(double v) {
  if (std::isnan(v)) throw std::invalid_argument("payload: NaN bound");
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}

double bound_from_json(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    throw std::invalid_argument("payload: bad bound string '" + s + "'");
  }
  if (!j.is_number()) throw std::invalid_argument("payload: bad bound");
  return j.get<double>();
}

double finite_from_json(const json& j, const char* what) {
  if (!j.is_number())
    throw std::invalid_argument(std::string("payload: bad ") + what);
  const double v = j.get<double>();
  if (!std::isfinite(v))
    throw std::invalid_argument(std::string("payload: non-finite ") + what);
  return v;
}

void check_interval(double lo, double hi, const char* what) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi)
    throw std::invalid_argument(std::string("payload: empty interval in ") +
                                what);
}

}  // namespace

std::string dump_payload(const EncodedPayload& payload) {
  json j;
  j["version"] = kPayloadVersion;
  j["P"] = payload.signal_length;
  j["Q"] = payload.channels * (payload.signal_length / payload.hop);
  j["frame"] = {{"window_length", payload.window_length},
                {"hop", payload.hop},
                {"channels", payload.channels},
                {"window", to_string(payload.window_family)}};
  j["seed"] = payload.seed;
  j["p_T"] = payload.p_time;
  j["p_TF"] = payload.p_tf;
  j["b_T"] = payload.bits_time;
  j["b_TF"] = payload.bits_tf;
  j["tf_scale"] = payload.tf_scale;
  j["bits"] = payload.bits;

  json time_records = json::array();
  for (const Record& r : payload.time_records)
    time_records.push_back(json::array({to_string(r.tag), r.observed,
                                        bound_to_json(r.lower),
                                        bound_to_json(r.upper)}));
  j["time_records"] = std::move(time_records);

  json tf_records = json::array();
  for (const TfRecord& r : payload.tf_records)
    tf_records.push_back(json::array(
        {to_string(r.tag),
         json::array({r.observed.real(), r.observed.imag()}),
         bound_to_json(r.re_lower), bound_to_json(r.re_upper),
         bound_to_json(r.im_lower), bound_to_json(r.im_upper)}));
  j["tf_records"] = std::move(tf_records);

  return j.dump();
}

EncodedPayload parse_payload(const std::string& text) {
  const json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("payload: not an object");
  if (j.value("version", -1) != kPayloadVersion)
    throw std::invalid_argument("payload: unsupported version");

  EncodedPayload payload;
  const json& f = j.at("frame");
  payload.window_length = f.at("window_length").get<std::size_t>();
  payload.hop = f.at("hop").get<std::size_t>();
  payload.channels = f.at("channels").get<std::size_t>();
  payload.window_family = window_from_string(f.at("window").get<std::string>());
  payload.signal_length = j.at("P").get<std::size_t>();
  payload.seed = j.at("seed").get<std::uint64_t>();
  payload.p_time = finite_from_json(j.at("p_T"), "p_T");
  payload.p_tf = finite_from_json(j.at("p_TF"), "p_TF");
  payload.bits_time = j.at("b_T").get<int>();
  payload.bits_tf = j.at("b_TF").get<int>();
  payload.tf_scale = finite_from_json(j.at("tf_scale"), "tf_scale");
  payload.bits = j.at("bits").get<std::uint64_t>();

  if (payload.hop == 0 || payload.signal_length % payload.hop != 0)
    throw std::invalid_argument("payload: P is not a multiple of the hop");
  const std::size_t Q =
      payload.channels * (payload.signal_length / payload.hop);
  if (j.at("Q").get<std::size_t>() != Q)
    throw std::invalid_argument("payload: Q does not match the frame");

  const json& tr = j.at("time_records");
  if (!tr.is_array() || tr.size() != payload.signal_length)
    throw std::invalid_argument("payload: wrong time_records length");
  payload.time_records.reserve(tr.size());
  for (const json& e : tr) {
    if (!e.is_array() || e.size() != 4)
      throw std::invalid_argument("payload: bad time record");
    Record r;
    r.tag = tag_from_string(e[0].get<std::string>());
    r.observed = finite_from_json(e[1], "observed sample");
    r.lower = bound_from_json(e[2]);
    r.upper = bound_from_json(e[3]);
    check_interval(r.lower, r.upper, "time record");
    payload.time_records.push_back(r);
  }

  const json& fr = j.at("tf_records");
  if (!fr.is_array() || fr.size() != Q)
    throw std::invalid_argument("payload: wrong tf_records length");
  payload.tf_records.reserve(fr.size());
  for (const json& e : fr) {
    if (!e.is_array() || e.size() != 6 || !e[1].is_array() ||
        e[1].size() != 2)
      throw std::invalid_argument("payload: bad tf record");
    TfRecord r;
    r.tag = tag_from_string(e[0].get<std::string>());
    r.observed = {finite_from_json(e[1][0], "observed coefficient"),
                  finite_from_json(e[1][1], "observed coefficient")};
    r.re_lower = bound_from_json(e[2]);
    r.re_upper = bound_from_json(e[3]);
    r.im_lower = bound_from_json(e[4]);
    r.im_upper = bound_from_json(e[5]);
    check_interval(r.re_lower, r.re_upper, "tf record");
    check_interval(r.im_lower, r.im_upper, "tf record");
    payload.tf_records.push_back(r);
  }
  return payload;
}

void write_payload(const std::string& path, const EncodedPayload& payload) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  const std::string text = dump_payload(payload);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.put('\n');
  if (!out) throw std::runtime_error("write failed: " + path);
}

EncodedPayload read_payload(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_payload(text);
}

}  // namespace dd
