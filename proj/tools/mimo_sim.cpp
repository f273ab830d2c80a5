#include <ctime>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mimolab/config.hpp"
#include "mimolab/harness.hpp"

namespace {

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mimo-sim: link-level simulator for phase-aligned space-time coding"};

  std::string experiment, config_path, out_path;
  std::vector<std::string> scheme_names;
  long trials = -1;
  int workers = -1, nt = 0, nr = 0;
  uint64_t seed = 0;
  std::string feedback_bits, mod, rate;

  app.add_option("--experiment", experiment,
                 "experiment: snr_cdf | sensitivity | uncoded_ber | coded_ofdm_ber");
  app.add_option("--config", config_path, "JSON config file (a run manifest also works)");
  app.add_option("--out", out_path, "output CSV path (default: <experiment>.csv)");
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  app.add_option("--trials", trials, "Monte-Carlo trials (snr_cdf / sensitivity)");
  app.add_option("--workers", workers, "worker threads (default: MIMO_LAB_WORKERS or all cores)");
  app.add_option("--scheme", scheme_names, "scheme name; repeatable, overrides the config list");
  app.add_option("--nt", nt, "transmit antennas (2, 3 or 4)");
  app.add_option("--nr", nr, "receive antennas");
  app.add_option("--feedback-bits", feedback_bits, "1 | 2 | inf (default scheme resolution)");
  app.add_option("--mod", mod, "qpsk | 16qam");
  app.add_option("--rate", rate, "1/2 | 3/4");

  CLI11_PARSE(app, argc, argv);

  try {
    mimolab::SimConfig cfg;
    bool have_config = !config_path.empty();
    if (!experiment.empty()) cfg.experiment = experiment;

    if (have_config) {
      cfg = mimolab::parse_config(config_path);
      if (!experiment.empty()) cfg.experiment = experiment;
    }

    if (!scheme_names.empty()) {
      cfg.schemes.clear();
      for (const std::string& n : scheme_names) cfg.schemes.push_back(mimolab::SchemeId::parse(n));
    }
    if (*seed_opt) cfg.master_seed = seed;
    if (trials >= 0) cfg.trials = trials;
    if (workers >= 0) cfg.workers = workers;
    if (nt > 0) cfg.nt = nt;
    if (nr > 0) cfg.nr = nr;
    if (!feedback_bits.empty()) {
      if (feedback_bits == "1") cfg.feedback_bits = mimolab::FeedbackBits::kOne;
      else if (feedback_bits == "2") cfg.feedback_bits = mimolab::FeedbackBits::kTwo;
      else if (feedback_bits == "inf") cfg.feedback_bits = mimolab::FeedbackBits::kInfinite;
      else throw std::invalid_argument("--feedback-bits must be 1, 2 or inf");
    }
    if (!mod.empty()) {
      if (mod == "qpsk") cfg.mod = mimolab::Modulation::kQpsk;
      else if (mod == "16qam") cfg.mod = mimolab::Modulation::kQam16;
      else throw std::invalid_argument("--mod must be qpsk or 16qam");
      cfg.mod_explicit = true;
    }
    if (!rate.empty()) {
      if (rate == "1/2") cfg.rate = mimolab::CodeRate::kHalf;
      else if (rate == "3/4") cfg.rate = mimolab::CodeRate::kThreeQuarters;
      else throw std::invalid_argument("--rate must be 1/2 or 3/4");
    }

    mimolab::finalize_config(cfg);

    if (out_path.empty()) out_path = cfg.experiment + ".csv";

    std::ofstream csv(out_path, std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open output file " + out_path);
    std::vector<std::string> summaries = mimolab::run_experiment_csv(cfg, csv);
    csv.close();
    if (!csv) throw std::runtime_error("write failed for " + out_path);

    mimolab::RunManifest manifest{cfg, out_path, utc_now(), "0.1.0"};
    std::string manifest_path = out_path + ".manifest.json";
    std::ofstream mf(manifest_path, std::ios::binary);
    if (!mf) throw std::runtime_error("cannot open manifest file " + manifest_path);
    mf << mimolab::manifest_to_json(manifest) << "\n";
    mf.close();

    std::cout << cfg.experiment << " -> " << out_path << " (manifest " << manifest_path << ")\n";
    for (const std::string& s : summaries) std::cout << "  " << s << "\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << app.help() << std::endl;
    return 1;
  }
}
