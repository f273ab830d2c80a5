#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "mimolab/config.hpp"
#include "mimolab/harness.hpp"

namespace py = pybind11;
using namespace mimolab;

namespace {

SimConfig config_from_text(const std::string& json_text) { return parse_config_text(json_text); }

py::dict cdf_to_dict(const SnrCdfResult& r) {
  py::dict out;
  for (const CdfSeries& s : r.series) {
    out[py::str(s.scheme.name())] = s.gains_db;
  }
  return out;
}

py::list sensitivity_to_list(const SensitivityResult& r) {
  py::list out;
  for (const SensitivityRow& row : r.rows) {
    py::dict d;
    d["scheme"] = row.scheme.name();
    d["rho"] = row.rho;
    d["mean_gap_db"] = row.mean_gap_db;
    d["trials"] = row.trials;
    out.append(d);
  }
  return out;
}

py::dict ber_to_dict(const BerResult& r) {
  py::dict out;
  for (const BerCurve& c : r.curves) {
    py::list pts;
    for (const BerPoint& p : c.points) {
      py::dict d;
      d["snr_db"] = p.snr_db;
      d["bits"] = p.bits;
      d["errors"] = p.errors;
      d["ber"] = p.ber();
      pts.append(d);
    }
    out[py::str(c.scheme.name())] = pts;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Phase-aligned space-time coding link simulator (C++ core)";

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<uint64_t, uint64_t>(), py::arg("master_seed"), py::arg("stream_id"))
      .def_property_readonly("master_seed", &RngStream::master_seed)
      .def_property_readonly("stream_id", &RngStream::stream_id)
      .def("next_u64", &RngStream::next_u64)
      .def("uniform", &RngStream::uniform)
      .def("gaussian", &RngStream::gaussian)
      .def("cgaussian", &RngStream::cgaussian);

  m.def("complex_gaussian_matrix", &complex_gaussian_matrix, py::arg("rows"), py::arg("cols"),
        py::arg("rng"));
  m.def(
      "dominant_beamformer",
      [](const CMat& h) {
        BeamformerResult r = dominant_beamformer(h);
        return py::make_tuple(r.weights, r.gain);
      },
      py::arg("h"), "Returns (weights, gain) of the dominant transmit direction");
  m.def("mmse_sinr", &mmse_sinr, py::arg("g"), py::arg("noise_var"));

  py::class_<ChannelBlock>(m, "ChannelBlock")
      .def(py::init([](const CMat& gains) {
             return ChannelBlock{static_cast<int>(gains.rows()), static_cast<int>(gains.cols()),
                                 gains};
           }),
           py::arg("gains"))
      .def_readonly("nt", &ChannelBlock::nt)
      .def_readonly("nr", &ChannelBlock::nr)
      .def_readonly("gains", &ChannelBlock::gains);

  m.def("draw_flat_block", &draw_flat_block, py::arg("nt"), py::arg("nr"), py::arg("rng"));
  m.def("ar1_step", &ar1_step, py::arg("cur"), py::arg("rho"), py::arg("innovation"));

  py::class_<FadingProcess>(m, "FadingProcess")
      .def(py::init<ChannelBlock, double, RngStream>(), py::arg("initial"), py::arg("rho"),
           py::arg("rng"))
      .def_readonly("current", &FadingProcess::current)
      .def_readonly("rho", &FadingProcess::rho);
  m.def("evolve_ar1", &evolve_ar1, py::arg("process"));

  py::class_<TdlProfile>(m, "TdlProfile")
      .def_readonly("tap_delays_ns", &TdlProfile::tap_delays_ns)
      .def_readonly("tap_powers", &TdlProfile::tap_powers)
      .def_readonly("rms_delay_spread_ns", &TdlProfile::rms_delay_spread_ns)
      .def_readonly("sample_period_ns", &TdlProfile::sample_period_ns)
      .def_readonly("tx_correlation", &TdlProfile::tx_correlation);
  m.def("build_tdl_profile", &build_tdl_profile, py::arg("rms_delay_spread_ns"),
        py::arg("sample_period_ns"), py::arg("tx_correlation"));
  m.def("computed_rms_delay_spread", &computed_rms_delay_spread, py::arg("profile"));

  py::class_<ToneChannelSet>(m, "ToneChannelSet")
      .def_readonly("tone_indices", &ToneChannelSet::tone_indices)
      .def_readonly("tones", &ToneChannelSet::tones)
      .def_readonly("tone_spacing_hz", &ToneChannelSet::tone_spacing_hz);
  m.def("draw_tdl_tones", &draw_tdl_tones, py::arg("profile"), py::arg("nt"), py::arg("nr"),
        py::arg("nfft"), py::arg("used_tones"), py::arg("tone_spacing_hz"), py::arg("rng"));

  py::enum_<FeedbackBits>(m, "FeedbackBits")
      .value("ONE", FeedbackBits::kOne)
      .value("TWO", FeedbackBits::kTwo)
      .value("INFINITE", FeedbackBits::kInfinite);

  py::class_<FeedbackWord>(m, "FeedbackWord")
      .def_readonly("theta", &FeedbackWord::theta)
      .def_readonly("bits", &FeedbackWord::bits)
      .def_readonly("index", &FeedbackWord::index);

  m.def("compute_alpha", &compute_alpha, py::arg("block"), py::arg("nt"));
  m.def("optimal_theta", &optimal_theta, py::arg("alpha"));
  m.def("sigma_gain", &sigma_gain, py::arg("block"), py::arg("theta"), py::arg("nt"));
  m.def("quantize_theta", &quantize_theta, py::arg("alpha"), py::arg("bits"));
  m.def("feedback_codebook", &feedback_codebook, py::arg("bits"));

  m.def(
      "alamouti_encode",
      [](Complex x0, Complex x1) { return alamouti_encode({x0, x1}); }, py::arg("x0"),
      py::arg("x1"));
  m.def("build_q", &build_q, py::arg("nt"), py::arg("thetas"));
  m.def("spatial_expand", &spatial_expand, py::arg("s"), py::arg("q"));
  m.def("qostbc_encode", &qostbc_encode, py::arg("symbols"));
  m.def("qostbc_interference", &qostbc_interference, py::arg("block"));
  m.def("ostbc_nulling_phase", &ostbc_nulling_phase, py::arg("block"));
  m.def("ostbc_bound_gain", &ostbc_bound_gain, py::arg("block"), py::arg("nt"));
  m.def("csd_phase", &csd_phase, py::arg("tone_freq_hz"), py::arg("shift_ns"));
  m.def("fstd_pair", &fstd_pair, py::arg("tone_index"), py::arg("nt"));

  py::class_<EffectiveChannel>(m, "EffectiveChannel")
      .def_readonly("per_rx", &EffectiveChannel::per_rx)
      .def_readonly("conj_instant", &EffectiveChannel::conj_instant)
      .def_readonly("nt", &EffectiveChannel::nt)
      .def("stacked", &EffectiveChannel::stacked)
      .def("gram", &EffectiveChannel::gram)
      .def("diag_gain", &EffectiveChannel::diag_gain);

  m.def("effective_alamouti_channel",
        py::overload_cast<const ChannelBlock&, double, int>(&effective_alamouti_channel),
        py::arg("block"), py::arg("theta"), py::arg("nt"));
  m.def("effective_alamouti_channel",
        py::overload_cast<const ChannelBlock&, const ChannelBlock&, double, int>(
            &effective_alamouti_channel),
        py::arg("block_k"), py::arg("block_k1"), py::arg("theta"), py::arg("nt"));
  m.def("effective_qostbc_channel",
        py::overload_cast<const ChannelBlock&, double>(&effective_qostbc_channel),
        py::arg("block"), py::arg("phi"));
  m.def("effective_qostbc_channel",
        py::overload_cast<const std::array<ChannelBlock, 4>&, double>(&effective_qostbc_channel),
        py::arg("blocks"), py::arg("phi"));

  py::class_<ConstellationSpec>(m, "ConstellationSpec")
      .def_static("qam", &ConstellationSpec::qam, py::arg("order"))
      .def_readonly("order", &ConstellationSpec::order)
      .def_readonly("scale", &ConstellationSpec::scale)
      .def("bits_per_symbol", &ConstellationSpec::bits_per_symbol);

  m.def("qam_point", &qam_point, py::arg("label"), py::arg("spec"));
  m.def("qam_map", &qam_map, py::arg("bits"), py::arg("spec"));
  m.def("qam_hard", &qam_hard, py::arg("y"), py::arg("spec"));
  m.def(
      "qam_llr",
      [](Complex y, double post_sinr, const ConstellationSpec& spec) {
        std::vector<double> out(spec.bits_per_symbol());
        qam_llr(y, post_sinr, spec, out.data());
        return out;
      },
      py::arg("y"), py::arg("post_sinr"), py::arg("spec"));

  py::enum_<CodeRate>(m, "CodeRate")
      .value("HALF", CodeRate::kHalf)
      .value("THREE_QUARTERS", CodeRate::kThreeQuarters);

  py::class_<CodeSpec>(m, "CodeSpec")
      .def(py::init([](CodeRate rate) {
             return CodeSpec{7, 0133, 0171, rate};
           }),
           py::arg("rate") = CodeRate::kHalf)
      .def_readonly("constraint_length", &CodeSpec::constraint_length)
      .def_readonly("rate", &CodeSpec::rate);

  m.def("conv_encode", &conv_encode, py::arg("bits"), py::arg("spec"));
  m.def("viterbi_decode", &viterbi_decode, py::arg("llrs"), py::arg("spec"));
  m.def("interleave", &interleave<uint8_t>, py::arg("bits"), py::arg("rows"), py::arg("cols"));
  m.def("deinterleave", &deinterleave<uint8_t>, py::arg("bits"), py::arg("rows"), py::arg("cols"));
  m.def("interleave_soft", &interleave<double>, py::arg("values"), py::arg("rows"),
        py::arg("cols"));
  m.def("deinterleave_soft", &deinterleave<double>, py::arg("values"), py::arg("rows"),
        py::arg("cols"));

  py::class_<ReceivedBlock>(m, "ReceivedBlock")
      .def_readonly("samples", &ReceivedBlock::samples)
      .def_readonly("sigma2", &ReceivedBlock::sigma2);
  py::class_<DetectionResult>(m, "DetectionResult")
      .def_readonly("estimates", &DetectionResult::estimates)
      .def_readonly("post_sinr", &DetectionResult::post_sinr)
      .def_readonly("diag_gain", &DetectionResult::diag_gain);

  m.def("simulate_reception", &simulate_reception, py::arg("codeword"), py::arg("blocks"),
        py::arg("sigma2"), py::arg("rng"), py::arg("scale") = -1.0);
  m.def("matched_filter_detect", &matched_filter_detect, py::arg("received"), py::arg("eff"));
  m.def("mmse_detect", &mmse_detect, py::arg("received"), py::arg("eff"), py::arg("sigma2"));

  // Experiment runners; config is the same JSON the CLI accepts.
  m.def(
      "run_snr_gain_cdf",
      [](const std::string& config_json) { return cdf_to_dict(run_snr_gain_cdf(config_from_text(config_json))); },
      py::arg("config_json"));
  m.def(
      "run_sensitivity",
      [](const std::string& config_json) {
        return sensitivity_to_list(run_sensitivity(config_from_text(config_json)));
      },
      py::arg("config_json"));
  m.def(
      "run_uncoded_ber",
      [](const std::string& config_json) { return ber_to_dict(run_uncoded_ber(config_from_text(config_json))); },
      py::arg("config_json"));
  m.def(
      "run_coded_ofdm_ber",
      [](const std::string& config_json) {
        return ber_to_dict(run_coded_ofdm_ber(config_from_text(config_json)));
      },
      py::arg("config_json"));
  m.def(
      "run_experiment_csv",
      [](const std::string& config_json) {
        SimConfig cfg = config_from_text(config_json);
        std::ostringstream csv;
        std::vector<std::string> summaries = run_experiment_csv(cfg, csv);
        return py::make_tuple(csv.str(), summaries);
      },
      py::arg("config_json"), "Runs the configured experiment; returns (csv_text, summaries)");
  m.def(
      "resolved_config",
      [](const std::string& config_json) { return config_to_json(config_from_text(config_json)); },
      py::arg("config_json"), "Validates a config and returns it with all defaults applied");

  m.attr("__version__") = "0.1.0";
}
