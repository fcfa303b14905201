// Command-line front end. Links against the C API only.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mwsplit.h"

namespace {

int exit_code(mws_status st) {
  switch (st) {
    case MWS_OK:
      return 0;
    case MWS_ERR_INVALID:
    case MWS_ERR_RANGE:
      return 2;
    case MWS_ERR_ACCURACY:
    case MWS_ERR_INTERNAL:
      return 3;
    case MWS_ERR_IO:
      return 4;
  }
  return 3;
}

int fail(mws_status st) {
  std::fprintf(stderr, "error: %s\n", mws_last_error());
  return exit_code(st);
}

struct FrameGuard {
  mws_frame* f = nullptr;
  ~FrameGuard() { mws_frame_free(f); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matter-wave splitting toolkit: band structure, Landau-Zener "
               "schedules, event-model and wave-solver simulations"};
  app.require_subcommand(1);

  double frame_wavelength = 914e-9;  // m
  double frame_mass = 1.44316060e-25;  // kg
  int jobs = 1;
  bool verbose = false;
  app.add_option("--frame-wavelength", frame_wavelength,
                 "lattice wavelength in meters");
  app.add_option("--frame-mass", frame_mass, "atom mass in kg");
  app.add_option("--jobs", jobs, "parallel simulations for scans");
  app.add_flag("--verbose", verbose, "chatty progress output");

  // band
  auto* band = app.add_subcommand("band", "band structure to CSV");
  double band_depth = 0.0;
  int band_count = 4, band_qpoints = 257, band_trunc = 0;
  std::string band_out = "bands.csv";
  band->add_option("--depth", band_depth, "lattice depth in E_r")
      ->required();
  band->add_option("--bands", band_count, "number of bands");
  band->add_option("--q-points", band_qpoints, "quasi-momentum grid size");
  band->add_option("--truncation", band_trunc, "plane-wave truncation L");
  band->add_option("--out", band_out, "output CSV path");

  // schedule
  auto* schedule =
      app.add_subcommand("schedule", "synthesize a depth schedule CSV");
  schedule->require_subcommand(1);
  auto* sch_eq = schedule->add_subcommand("equal-split",
                                          "m equal packets via tunneling");
  int eq_m = 6;
  std::string sch_out = "schedule.csv";
  sch_eq->add_option("--m", eq_m, "number of packets")->required();
  sch_eq->add_option("--out", sch_out, "output CSV path");
  auto* sch_fr =
      schedule->add_subcommand("fractions", "arbitrary splitting fractions");
  std::vector<double> fr_list;
  std::string sch_fr_out = "schedule.csv";
  sch_fr->add_option("values", fr_list, "fractions summing to 1")
      ->required()
      ->expected(-1);
  sch_fr->add_option("--out", sch_fr_out, "output CSV path");
  auto* sch_br = schedule->add_subcommand("bragg", "high-order Bragg pulse");
  int br_order = 1;
  double br_len = 0.0;
  std::string sch_br_out = "schedule.csv";
  sch_br->add_option("--order", br_order, "Bragg order (1-3)")->required();
  sch_br->add_option("--pulse-length", br_len, "pulse length in seconds");
  sch_br->add_option("--out", sch_br_out, "output CSV path");

  // run
  auto* run = app.add_subcommand("run", "run a scenario or preset");
  std::string run_preset, run_scenario, run_out = "out";
  std::string run_engine = "both";
  std::vector<std::string> run_sets;
  run->add_option("--preset", run_preset, "preset name (see 'presets')");
  run->add_option("--scenario", run_scenario, "scenario file path");
  run->add_option("--out", run_out, "output directory");
  run->add_option("--engine", run_engine, "event | wave | both")
      ->check(CLI::IsMember({"event", "wave", "both"}));
  run->add_option("--set", run_sets,
                  "override, scenario grammar: --set \"run.t_end = 10 ms\"");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "detect packets in a "
                                                "density CSV");
  std::string an_density, an_out = "packets.csv";
  double an_threshold = 0.0, an_minsep = 0.0;
  analyze->add_option("--density", an_density, "density CSV (t,x,density)")
      ->required();
  analyze->add_option("--threshold", an_threshold,
                      "threshold fraction of the peak");
  analyze->add_option("--min-separation", an_minsep,
                      "minimum packet separation in meters");
  analyze->add_option("--out", an_out, "packet CSV path");

  // presets
  auto* presets = app.add_subcommand("presets", "list built-in presets");
  std::string presets_write;
  presets->add_option("--write", presets_write,
                      "write every preset scenario file into this directory");

  CLI11_PARSE(app, argc, argv);

  FrameGuard frame;
  if (mws_status st =
          mws_frame_create(frame_wavelength, frame_mass, &frame.f))
    return fail(st);

  if (*band) {
    if (band_qpoints < 2) {
      std::fprintf(stderr, "error: --q-points must be >= 2\n");
      return 2;
    }
    std::vector<double> q(band_qpoints);
    for (int i = 0; i < band_qpoints; ++i)
      q[i] = -1.0 + 2.0 * i / (band_qpoints - 1);
    mws_bands* b = nullptr;
    if (mws_status st = mws_bands_compute(band_depth, band_count, q.data(),
                                          q.size(), band_trunc, &b))
      return fail(st);
    const mws_status st = mws_bands_write_csv(b, band_out.c_str());
    mws_bands_free(b);
    if (st) return fail(st);
    if (verbose) std::printf("wrote %s\n", band_out.c_str());
    return 0;
  }

  if (*schedule) {
    mws_status st = MWS_OK;
    if (*sch_eq) {
      st = mws_schedule_equal_split_csv(frame.f, eq_m, sch_out.c_str());
    } else if (*sch_fr) {
      st = mws_schedule_fractions_csv(frame.f, fr_list.data(),
                                      fr_list.size(), sch_fr_out.c_str());
    } else if (*sch_br) {
      st = mws_schedule_bragg_csv(frame.f, br_order, br_len,
                                  sch_br_out.c_str());
    }
    if (st) return fail(st);
    return 0;
  }

  if (*run) {
    if (run_preset.empty() == run_scenario.empty()) {
      std::fprintf(stderr,
                   "error: give exactly one of --preset or --scenario\n");
      return 2;
    }
    mws_scenario* scn = nullptr;
    mws_status st = run_preset.empty()
                        ? mws_scenario_parse_file(run_scenario.c_str(), &scn)
                        : mws_scenario_preset(run_preset.c_str(), &scn);
    if (st) return fail(st);
    for (const auto& assignment : run_sets) {
      if ((st = mws_scenario_set(scn, assignment.c_str()))) {
        mws_scenario_free(scn);
        return fail(st);
      }
    }
    mws_run_options opts;
    mws_run_options_init(&opts);
    opts.engine = run_engine == "event"
                      ? MWS_ENGINE_EVENT
                      : run_engine == "wave" ? MWS_ENGINE_WAVE
                                             : MWS_ENGINE_BOTH;
    opts.jobs = jobs;
    opts.verbose = verbose ? 1 : 0;
    st = mws_run(scn, &opts, run_out.c_str());
    mws_scenario_free(scn);
    if (st) return fail(st);
    if (verbose)
      std::printf("run complete, outputs in %s (see manifest.txt)\n",
                  run_out.c_str());
    return 0;
  }

  if (*analyze) {
    size_t needed = 0;
    mws_status st = mws_analyze_density_csv(an_density.c_str(), an_threshold,
                                            an_minsep, an_out.c_str(),
                                            nullptr, 0, &needed);
    if (st) return fail(st);
    std::string summary(needed, '\0');
    st = mws_analyze_density_csv(an_density.c_str(), an_threshold, an_minsep,
                                 nullptr, summary.data(), summary.size(),
                                 &needed);
    if (st) return fail(st);
    std::fputs(summary.c_str(), stdout);
    return 0;
  }

  if (*presets) {
    size_t needed = 0;
    mws_preset_names(nullptr, 0, &needed);
    std::string names(needed, '\0');
    mws_preset_names(names.data(), names.size(), &needed);
    std::fputs(names.c_str(), stdout);
    if (!presets_write.empty()) {
      // one scenario file per preset
      std::string list = names.c_str();
      size_t pos = 0;
      while (pos < list.size()) {
        const size_t nl = list.find('\n', pos);
        const std::string name = list.substr(pos, nl - pos);
        pos = nl == std::string::npos ? list.size() : nl + 1;
        if (name.empty()) continue;
        mws_scenario* scn = nullptr;
        if (mws_status st = mws_scenario_preset(name.c_str(), &scn))
          return fail(st);
        const std::string file = presets_write + "/" + name + ".mws";
        const mws_status st = mws_scenario_save(scn, file.c_str());
        mws_scenario_free(scn);
        if (st) return fail(st);
      }
    }
    return 0;
  }

  return 2;
}
