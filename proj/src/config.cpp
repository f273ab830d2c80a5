#include "mimolab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace mimolab {
namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw std::invalid_argument("config: unknown key '" + where + it.key() + "'");
    }
  }
}

FeedbackBits parse_bits(const json& v) {
  if (v.is_number_integer()) {
    int b = v.get<int>();
    if (b == 1) return FeedbackBits::kOne;
    if (b == 2) return FeedbackBits::kTwo;
  } else if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "1") return FeedbackBits::kOne;
    if (s == "2") return FeedbackBits::kTwo;
    if (s == "inf") return FeedbackBits::kInfinite;
  }
  throw std::invalid_argument("config: feedback_bits must be 1, 2 or \"inf\"");
}

std::string bits_to_string(FeedbackBits b) {
  switch (b) {
    case FeedbackBits::kOne: return "1";
    case FeedbackBits::kTwo: return "2";
    case FeedbackBits::kInfinite: return "inf";
  }
  return "?";
}

ChannelKind parse_channel_kind(const std::string& s) {
  if (s == "flat") return ChannelKind::kFlat;
  if (s == "ar1") return ChannelKind::kAr1;
  if (s == "tdl") return ChannelKind::kTdl;
  throw std::invalid_argument("config: channel.type must be flat, ar1 or tdl");
}

std::string channel_kind_name(ChannelKind k) {
  switch (k) {
    case ChannelKind::kFlat: return "flat";
    case ChannelKind::kAr1: return "ar1";
    case ChannelKind::kTdl: return "tdl";
  }
  return "?";
}

void parse_channel(const json& j, ChannelConfig& c) {
  require_keys(j, "channel.",
               {"type", "rho", "rms_delay_spread_ns", "sample_period_ns", "tx_correlation"});
  if (j.contains("type")) c.type = parse_channel_kind(j.at("type").get<std::string>());
  if (j.contains("rho")) c.rho = j.at("rho").get<double>();
  if (j.contains("rms_delay_spread_ns")) c.rms_delay_spread_ns = j.at("rms_delay_spread_ns").get<double>();
  if (j.contains("sample_period_ns")) c.sample_period_ns = j.at("sample_period_ns").get<double>();
  if (j.contains("tx_correlation")) c.tx_correlation = j.at("tx_correlation").get<double>();
}

void parse_ofdm(const json& j, OfdmConfig& o) {
  require_keys(j, "ofdm.", {"nfft", "used_tones", "cp_ns", "tone_spacing_hz", "symbols_per_packet"});
  if (j.contains("nfft")) o.nfft = j.at("nfft").get<int>();
  if (j.contains("used_tones")) o.used_tones = j.at("used_tones").get<std::vector<int>>();
  if (j.contains("cp_ns")) o.cp_ns = j.at("cp_ns").get<double>();
  if (j.contains("tone_spacing_hz")) o.tone_spacing_hz = j.at("tone_spacing_hz").get<double>();
  if (j.contains("symbols_per_packet")) o.symbols_per_packet = j.at("symbols_per_packet").get<int>();
}

void parse_stop(const json& j, StopConfig& s) {
  require_keys(j, "stop.",
               {"target_bit_errors", "target_packet_errors", "max_codewords_per_point",
                "max_packets_per_point", "batch_codewords", "batch_packets"});
  if (j.contains("target_bit_errors")) s.target_bit_errors = j.at("target_bit_errors").get<long>();
  if (j.contains("target_packet_errors")) s.target_packet_errors = j.at("target_packet_errors").get<long>();
  if (j.contains("max_codewords_per_point")) s.max_codewords_per_point = j.at("max_codewords_per_point").get<long>();
  if (j.contains("max_packets_per_point")) s.max_packets_per_point = j.at("max_packets_per_point").get<long>();
  if (j.contains("batch_codewords")) s.batch_codewords = j.at("batch_codewords").get<long>();
  if (j.contains("batch_packets")) s.batch_packets = j.at("batch_packets").get<long>();
}

SimConfig config_from_json(const json& j) {
  require_keys(j, "",
               {"experiment", "schemes", "nt", "nr", "trials", "snr_grid_db", "feedback_bits",
                "rho_grid", "channel", "ofdm", "mod", "rate", "csd_shifts_ns", "stop",
                "master_seed", "workers"});
  SimConfig c;
  if (j.contains("experiment")) c.experiment = j.at("experiment").get<std::string>();
  if (j.contains("schemes")) {
    for (const auto& s : j.at("schemes")) c.schemes.push_back(SchemeId::parse(s.get<std::string>()));
  }
  if (j.contains("nt")) c.nt = j.at("nt").get<int>();
  if (j.contains("nr")) c.nr = j.at("nr").get<int>();
  if (j.contains("trials")) c.trials = j.at("trials").get<long>();
  if (j.contains("snr_grid_db")) c.snr_grid_db = j.at("snr_grid_db").get<std::vector<double>>();
  if (j.contains("feedback_bits")) c.feedback_bits = parse_bits(j.at("feedback_bits"));
  if (j.contains("rho_grid")) c.rho_grid = j.at("rho_grid").get<std::vector<double>>();
  if (j.contains("channel")) parse_channel(j.at("channel"), c.channel);
  if (j.contains("ofdm")) parse_ofdm(j.at("ofdm"), c.ofdm);
  if (j.contains("mod")) {
    std::string m = j.at("mod").get<std::string>();
    if (m == "qpsk") c.mod = Modulation::kQpsk;
    else if (m == "16qam") c.mod = Modulation::kQam16;
    else throw std::invalid_argument("config: mod must be qpsk or 16qam");
    c.mod_explicit = true;
  }
  if (j.contains("rate")) {
    std::string r = j.at("rate").get<std::string>();
    if (r == "1/2") c.rate = CodeRate::kHalf;
    else if (r == "3/4") c.rate = CodeRate::kThreeQuarters;
    else throw std::invalid_argument("config: rate must be 1/2 or 3/4");
  }
  if (j.contains("csd_shifts_ns")) c.csd_shifts_ns = j.at("csd_shifts_ns").get<std::vector<double>>();
  if (j.contains("stop")) parse_stop(j.at("stop"), c.stop);
  if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<uint64_t>();
  if (j.contains("workers")) c.workers = j.at("workers").get<int>();
  finalize_config(c);
  return c;
}

const std::set<std::string> kCdfSchemes = {"beamforming", "ostbc_bound", "qostbc"};

}  // namespace

void finalize_config(SimConfig& config) {
  const std::string& exp = config.experiment;
  if (exp != "snr_cdf" && exp != "sensitivity" && exp != "uncoded_ber" && exp != "coded_ofdm_ber") {
    throw std::invalid_argument(
        "config: experiment must be one of snr_cdf, sensitivity, uncoded_ber, coded_ofdm_ber");
  }
  if (config.nt < 2 || config.nt > 4) {
    throw std::invalid_argument("config: nt must be 2, 3 or 4");
  }
  if (config.nr < 1) throw std::invalid_argument("config: nr must be >= 1");
  if (config.trials < 1) throw std::invalid_argument("config: trials must be >= 1");

  std::string pa = config.nt == 3 ? "phase_aligned_3tx_" : "phase_aligned_4tx_";
  std::string pa_bits = pa + bits_to_string(config.feedback_bits) +
                        (config.feedback_bits == FeedbackBits::kInfinite ? "" : "bit");

  if (config.schemes.empty()) {
    std::vector<std::string> names;
    if (exp == "snr_cdf") {
      names = {"beamforming", "ostbc_bound", pa + "inf", pa + "2bit", pa + "1bit"};
      if (config.nt == 4) names.push_back("qostbc");
    } else if (exp == "sensitivity") {
      names = {pa_bits, "qostbc", "ostbc_nulled"};
    } else if (exp == "uncoded_ber") {
      names = {"beamforming", pa + "inf", pa + "2bit", pa + "1bit", "ostbc_bound", "alamouti_2x1"};
    } else {
      names = {"siso", "alamouti_2x1", "csd", "fstd", pa + "inf", pa + "2bit", pa + "1bit",
               "beamforming"};
      if (config.nt == 4) {
        names.push_back("ostbc_nulled");
        names.push_back("qostbc");
      }
    }
    for (const std::string& n : names) config.schemes.push_back(SchemeId::parse(n));
  }

  for (const SchemeId& s : config.schemes) {
    int need = 1;
    switch (s.kind) {
      case SchemeKind::kSiso: need = 1; break;
      case SchemeKind::kAlamouti2x1: need = 2; break;
      case SchemeKind::kPhaseAligned:
      case SchemeKind::kSpatialMapFixed: need = s.nt; break;
      case SchemeKind::kOstbcNulled:
      case SchemeKind::kQoStbc: need = 4; break;
      default: need = config.nt; break;
    }
    if (need > config.nt) {
      throw std::invalid_argument("config: scheme " + s.name() + " needs nt >= " +
                                  std::to_string(need) + " but nt = " + std::to_string(config.nt));
    }
    if (exp == "snr_cdf" && s.kind != SchemeKind::kPhaseAligned && !kCdfSchemes.count(s.name())) {
      throw std::invalid_argument("config: scheme " + s.name() + " is incompatible with snr_cdf");
    }
    if (exp == "sensitivity" &&
        (s.kind == SchemeKind::kSiso || s.kind == SchemeKind::kCsd || s.kind == SchemeKind::kFstd ||
         s.kind == SchemeKind::kBeamforming || s.kind == SchemeKind::kOstbcBound)) {
      throw std::invalid_argument("config: scheme " + s.name() + " is incompatible with sensitivity");
    }
  }

  if (!config.mod_explicit) {
    config.mod = exp == "coded_ofdm_ber" ? Modulation::kQpsk : Modulation::kQam16;
    config.mod_explicit = true;
  }

  if (config.snr_grid_db.empty()) {
    if (exp == "snr_cdf" || exp == "sensitivity") {
      config.snr_grid_db = {10.0};  // noise 10 dB below unit signal power
    } else if (exp == "uncoded_ber" || exp == "coded_ofdm_ber") {
      for (int s = 0; s <= 30; s += 2) config.snr_grid_db.push_back(s);
    }
  }
  for (double s : config.snr_grid_db) {
    if (!std::isfinite(s)) throw std::invalid_argument("config: snr_grid_db must be finite");
  }
  if ((exp == "snr_cdf" || exp == "sensitivity") && config.snr_grid_db.size() != 1) {
    throw std::invalid_argument("config: " + exp + " uses a single noise level");
  }
  if (exp == "snr_cdf" || exp == "uncoded_ber") {
    config.channel.type = ChannelKind::kFlat;
  } else if (exp == "sensitivity") {
    config.channel.type = ChannelKind::kAr1;
  }

  if (exp == "sensitivity") {
    if (config.rho_grid.empty()) {
      config.rho_grid = {1.0, 0.99, 0.98, 0.95, 0.92, 0.9, 0.85, 0.8, 0.75, 0.7};
    }
    for (double r : config.rho_grid) {
      if (!(r >= 0.0 && r <= 1.0)) {
        throw std::invalid_argument("config: rho_grid values must be in [0, 1]");
      }
    }
    if (std::find(config.rho_grid.begin(), config.rho_grid.end(), 1.0) == config.rho_grid.end()) {
      throw std::invalid_argument("config: rho_grid must contain 1.0 (the gap reference)");
    }
    bool has_qostbc = false;
    for (const SchemeId& s : config.schemes) has_qostbc |= s.kind == SchemeKind::kQoStbc;
    if (!has_qostbc) {
      throw std::invalid_argument("config: sensitivity needs qostbc (the rho=1 reference scheme)");
    }
  } else if (!config.rho_grid.empty()) {
    throw std::invalid_argument("config: rho_grid only applies to the sensitivity experiment");
  }

  if (exp == "coded_ofdm_ber") {
    if (config.channel.type != ChannelKind::kTdl) config.channel.type = ChannelKind::kTdl;
    if (config.ofdm.used_tones.empty()) {
      for (int k = -26; k <= 26; ++k) {
        if (k != 0) config.ofdm.used_tones.push_back(k);
      }
    }
    for (int k : config.ofdm.used_tones) {
      if (k < -config.ofdm.nfft / 2 || k >= config.ofdm.nfft / 2) {
        throw std::invalid_argument("config: used_tones must lie in [-nfft/2, nfft/2)");
      }
    }
    ConstellationSpec cs = config.constellation();
    size_t per_packet = config.ofdm.used_tones.size() * cs.bits_per_symbol() *
                        config.ofdm.symbols_per_packet;
    message_length_for(per_packet, config.code());  // throws on framing mismatch
    int quantum = 1;
    for (const SchemeId& s : config.schemes) {
      if (s.kind == SchemeKind::kOstbcNulled || s.kind == SchemeKind::kQoStbc) quantum = 4;
      else if (quantum < 2 && (s.kind == SchemeKind::kAlamouti2x1 || s.kind == SchemeKind::kFstd ||
                               s.kind == SchemeKind::kPhaseAligned ||
                               s.kind == SchemeKind::kSpatialMapFixed))
        quantum = 2;
    }
    if (config.ofdm.symbols_per_packet % quantum != 0) {
      throw std::invalid_argument("config: symbols_per_packet must be a multiple of the codeword span");
    }
    if (config.csd_shifts_ns.empty()) {
      config.csd_shifts_ns = config.nt == 3 ? std::vector<double>{0, -100, -200}
                                            : std::vector<double>{0, -50, -100, -150};
    }
    if (config.csd_shifts_ns.size() != static_cast<size_t>(config.nt)) {
      throw std::invalid_argument("config: csd_shifts_ns needs one entry per transmit antenna");
    }
  }

  if (config.channel.rho < 0.0 || config.channel.rho > 1.0) {
    throw std::invalid_argument("config: channel.rho must be in [0, 1]");
  }
  if (config.stop.target_bit_errors < 1 || config.stop.target_packet_errors < 1 ||
      config.stop.batch_codewords < 1 || config.stop.batch_packets < 1 ||
      config.stop.max_codewords_per_point < 1 || config.stop.max_packets_per_point < 1) {
    throw std::invalid_argument("config: stop parameters must be >= 1");
  }
}

SimConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  if (j.contains("config")) {
    // Manifest replay: run metadata wraps the resolved config.
    json inner = j.at("config");
    return config_from_json(inner);
  }
  return config_from_json(j);
}

SimConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string config_to_json(const SimConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  std::vector<std::string> names;
  for (const SchemeId& s : c.schemes) names.push_back(s.name());
  j["schemes"] = names;
  j["nt"] = c.nt;
  j["nr"] = c.nr;
  j["trials"] = c.trials;
  j["snr_grid_db"] = c.snr_grid_db;
  j["feedback_bits"] = bits_to_string(c.feedback_bits);
  if (!c.rho_grid.empty()) j["rho_grid"] = c.rho_grid;
  j["channel"] = {{"type", channel_kind_name(c.channel.type)},
                  {"rho", c.channel.rho},
                  {"rms_delay_spread_ns", c.channel.rms_delay_spread_ns},
                  {"sample_period_ns", c.channel.sample_period_ns},
                  {"tx_correlation", c.channel.tx_correlation}};
  j["ofdm"] = {{"nfft", c.ofdm.nfft},
               {"used_tones", c.ofdm.used_tones},
               {"cp_ns", c.ofdm.cp_ns},
               {"tone_spacing_hz", c.ofdm.tone_spacing_hz},
               {"symbols_per_packet", c.ofdm.symbols_per_packet}};
  j["mod"] = c.mod == Modulation::kQpsk ? "qpsk" : "16qam";
  j["rate"] = c.rate == CodeRate::kHalf ? "1/2" : "3/4";
  if (!c.csd_shifts_ns.empty()) j["csd_shifts_ns"] = c.csd_shifts_ns;
  j["stop"] = {{"target_bit_errors", c.stop.target_bit_errors},
               {"target_packet_errors", c.stop.target_packet_errors},
               {"max_codewords_per_point", c.stop.max_codewords_per_point},
               {"max_packets_per_point", c.stop.max_packets_per_point},
               {"batch_codewords", c.stop.batch_codewords},
               {"batch_packets", c.stop.batch_packets}};
  j["master_seed"] = c.master_seed;
  j["workers"] = c.workers;
  return j.dump(2);
}

std::string manifest_to_json(const RunManifest& m) {
  json j;
  j["experiment"] = m.config.experiment;
  j["artifact_version"] = m.artifact_version;
  j["created_utc"] = m.created_utc;
  j["output_csv"] = m.output_csv;
  j["master_seed"] = m.config.master_seed;
  j["config"] = json::parse(config_to_json(m.config));
  return j.dump(2);
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MIMO_LAB_WORKERS")) {
    int w = std::atoi(env);
    if (w > 0) return w;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace mimolab
