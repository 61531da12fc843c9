#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "bicm/de_coupled.hpp"
#include "bicm/de_flat.hpp"
#include "bicm/gexit.hpp"
#include "bicm/gmi.hpp"
#include "bicm/version.hpp"
#include "output.hpp"

namespace {

using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitNonconvergence = 3;

struct CommonOpts {
  std::string mod = "qpsk";
  std::string channel = "awgn";
  std::string demapper = "map";
  std::uint64_t seed = 12345;
  int threads = 0;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& c, bool with_demapper = true) {
  cmd->add_option("--mod", c.mod, "Modulation: qpsk, 16qam, 64qam")->capture_default_str();
  cmd->add_option("--channel", c.channel, "Channel: awgn, rayleigh")->capture_default_str();
  if (with_demapper)
    cmd->add_option("--demapper", c.demapper, "Demapper: map, mlm")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Master seed (all randomness derives from it)")
      ->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  cmd->add_option("-o,--out", c.out_path, "Write the JSON result to this file");
}

bicm::ChannelSpec make_spec(const CommonOpts& c, double sigma = 1.0) {
  return bicm::ChannelSpec{bicm::build_constellation(bicm::parse_modulation(c.mod)),
                           bicm::parse_fading(c.channel), sigma};
}

json common_config(const CommonOpts& c) {
  return json{{"mod", c.mod}, {"channel", c.channel}, {"demapper", c.demapper},
              {"seed", c.seed}, {"threads", c.threads}};
}

void parse_ensemble(const std::string& s, int& dl, int& dr) {
  if (std::sscanf(s.c_str(), "%d,%d", &dl, &dr) != 2)
    throw CLI::ValidationError("--ensemble", "expected dl,dr (e.g. 3,6)");
}

void emit(const CommonOpts& c, const json& envelope) {
  std::printf("%s\n", envelope.dump(2).c_str());
  if (!c.out_path.empty()) bicm::cli::write_json_file(envelope, c.out_path);
}

void apply_threads(const CommonOpts& c) {
  if (c.threads > 0) setenv("BICM_THREADS", std::to_string(c.threads).c_str(), 1);
}

// ---------------------------------------------------------------------------

int run_gmi(const CommonOpts& c, double rate, std::int64_t samples, const std::string& mode,
            double ebn0_db, double sigma, double alpha, int noise_flags) {
  apply_threads(c);
  json config = common_config(c);
  config["samples"] = samples;
  config["mode"] = mode;

  const bicm::DemapperKind kind = bicm::parse_demapper(c.demapper);
  if (rate > 0.0) {
    if (noise_flags != 0)
      throw CLI::ValidationError("gmi", "--rate excludes the noise-point flags");
    config["rate"] = rate;
    const auto thr = bicm::noise_threshold(
        make_spec(c), kind, rate,
        mode == "cm" ? bicm::ThresholdMode::Cm : bicm::ThresholdMode::Gmi, samples, c.seed);
    std::printf("noise threshold  %-6s %-8s %-4s rate %.4f : Eb/N0 = %.3f dB (sigma %.6f)\n",
                c.mod.c_str(), c.channel.c_str(), c.demapper.c_str(), rate, thr.ebn0_db,
                thr.sigma_star);
    emit(c, bicm::cli::make_envelope(config, c.seed,
                                     json{{"sigma_star", thr.sigma_star},
                                          {"ebn0_db", thr.ebn0_db},
                                          {"samples", thr.samples},
                                          {"stderr", thr.stderr_}}));
    return 0;
  }

  if (noise_flags != 1)
    throw CLI::ValidationError("gmi",
                               "give exactly one of --ebn0-db, --sigma, --alpha (or --rate)");
  bicm::ChannelSpec spec = make_spec(c);
  const int m_bits = spec.constellation.bits_per_symbol;
  if (ebn0_db != -1e30) {
    config["ebn0_db"] = ebn0_db;
    spec.sigma = bicm::ebn0_to_sigma(ebn0_db, 0.5, m_bits);  // rate-1/2 convention
  } else if (sigma > 0.0) {
    config["sigma"] = sigma;
    spec.sigma = sigma;
  } else {
    config["alpha"] = alpha;
    spec.sigma = bicm::alpha_to_sigma(spec, alpha, 400000, bicm::Rng(c.seed).child(7).next_u64());
  }

  bicm::Rng rng(c.seed);
  const auto g = bicm::gmi(spec, kind, samples, rng);
  const auto cm = bicm::cm_mutual_info(spec, samples, rng);
  std::printf("gmi %-6s %-8s %-4s sigma %.6f : GMI = %.6f bits/symbol (s* = %.4f), CM = %.6f\n",
              c.mod.c_str(), c.channel.c_str(), c.demapper.c_str(), spec.sigma, g.value,
              g.s_star, cm.value);
  emit(c, bicm::cli::make_envelope(config, c.seed,
                                   json{{"sigma", spec.sigma},
                                        {"gmi", g.value},
                                        {"s_star", g.s_star},
                                        {"gmi_stderr", g.stderr_},
                                        {"cm", cm.value},
                                        {"cm_stderr", cm.stderr_},
                                        {"samples", samples}}));
  return 0;
}

int run_threshold(const CommonOpts& c, const std::string& ensemble, int id_period,
                  std::int64_t phi_samples, int max_iters, double grid_max, int grid_half,
                  double granularity) {
  apply_threads(c);
  int dl, dr;
  parse_ensemble(ensemble, dl, dr);
  const auto profile = bicm::DegreeProfile::regular(dl, dr);

  bicm::DeSchedule schedule;
  if (id_period > 0) {
    schedule.mode = bicm::DeSchedule::Mode::Id;
    schedule.id_period = id_period;
  }
  schedule.max_iters = max_iters;
  bicm::DeOptions opts;
  opts.grid = {grid_max, grid_half};
  opts.phi_samples = phi_samples;
  opts.seed = c.seed;

  const auto thr = bicm::bp_threshold(profile, make_spec(c), bicm::parse_demapper(c.demapper),
                                      schedule, opts, granularity);
  std::printf("bp threshold (%d,%d) %-6s %-8s %-4s : Eb/N0 = %.3f dB (sigma %.6f, %d iters)\n",
              dl, dr, c.mod.c_str(), c.channel.c_str(), c.demapper.c_str(), thr.ebn0_db,
              thr.sigma, thr.iters_at_threshold);
  json config = common_config(c);
  config["ensemble"] = ensemble;
  config["id_period"] = id_period;
  config["phi_samples"] = phi_samples;
  config["max_iters"] = max_iters;
  config["grid"] = {{"max_llr", grid_max}, {"half_cells", grid_half}};
  config["granularity_db"] = granularity;
  emit(c, bicm::cli::make_envelope(config, c.seed,
                                   json{{"ebn0_db", thr.ebn0_db},
                                        {"sigma", thr.sigma},
                                        {"iters_at_threshold", thr.iters_at_threshold}}));
  return 0;
}

int run_sc_threshold(const CommonOpts& c, const std::string& ensemble, int big_l, int w,
                     int id_period, std::int64_t phi_samples, int max_iters, double grid_max,
                     int grid_half, double granularity, double noise_thr_db,
                     std::int64_t gmi_samples) {
  apply_threads(c);
  int dl, dr;
  parse_ensemble(ensemble, dl, dr);
  const bicm::ScEnsemble ens{dl, dr, big_l, w};

  bicm::DeSchedule schedule;
  if (id_period > 0) {
    schedule.mode = bicm::DeSchedule::Mode::Id;
    schedule.id_period = id_period;
  }
  schedule.max_iters = max_iters;
  bicm::DeOptions opts;
  opts.grid = {grid_max, grid_half};
  opts.phi_samples = phi_samples;
  opts.seed = c.seed;

  const auto kind = bicm::parse_demapper(c.demapper);
  const auto thr = bicm::sc_bp_threshold(ens, make_spec(c), kind, schedule, opts, granularity);

  // Gap against the noise threshold at the nominal rate (computed here
  // unless supplied), asymptotic gap with the rate loss removed.
  if (noise_thr_db == -1e30) {
    noise_thr_db = bicm::noise_threshold(make_spec(c), kind, ens.nominal_rate(),
                                         bicm::ThresholdMode::Gmi, gmi_samples, c.seed)
                       .ebn0_db;
  }
  const double gap = thr.ebn0_db - noise_thr_db;
  const double asympt_gap = gap - bicm::sc_rate_loss_db(ens);
  std::printf(
      "sc bp threshold (%d,%d,%d,%d) %-6s %-8s %-4s : Eb/N0 = %.3f dB, gap %.3f, asympt %.3f "
      "(rate %.6f)\n",
      dl, dr, big_l, w, c.mod.c_str(), c.channel.c_str(), c.demapper.c_str(), thr.ebn0_db, gap,
      asympt_gap, thr.design_rate);
  json config = common_config(c);
  config["ensemble"] = ensemble;
  config["L"] = big_l;
  config["w"] = w;
  config["id_period"] = id_period;
  config["phi_samples"] = phi_samples;
  config["max_iters"] = max_iters;
  config["grid"] = {{"max_llr", grid_max}, {"half_cells", grid_half}};
  config["granularity_db"] = granularity;
  emit(c, bicm::cli::make_envelope(config, c.seed,
                                   json{{"ebn0_db", thr.ebn0_db},
                                        {"sigma", thr.sigma},
                                        {"design_rate", thr.design_rate},
                                        {"gap_db", gap},
                                        {"asympt_gap_db", asympt_gap},
                                        {"noise_threshold_db", noise_thr_db},
                                        {"iters_at_threshold", thr.iters_at_threshold}}));
  return 0;
}

int run_gexit(const CommonOpts& c, const std::string& ensemble, const std::string& sc,
              int alpha_grid, std::int64_t phi_samples, std::int64_t kernel_samples,
              int max_iters, double grid_max, int grid_half, const std::string& csv_path) {
  apply_threads(c);
  int dl, dr;
  parse_ensemble(ensemble, dl, dr);

  bicm::DeSchedule schedule;
  schedule.max_iters = max_iters;
  bicm::DeOptions dopts;
  dopts.grid = {grid_max, grid_half};
  dopts.phi_samples = phi_samples;
  dopts.seed = c.seed;
  bicm::GexitOptions kopts;
  kopts.kernel_samples = kernel_samples;
  kopts.seed = c.seed;
  bicm::GexitGridOptions gopts;
  gopts.n_points = alpha_grid;

  const auto kind = bicm::parse_demapper(c.demapper);
  bicm::GexitCurve curve;
  double rate;
  if (!sc.empty()) {
    int big_l, w;
    if (std::sscanf(sc.c_str(), "%d,%d", &big_l, &w) != 2)
      throw CLI::ValidationError("--sc", "expected L,w (e.g. 32,4)");
    const bicm::ScEnsemble ens{dl, dr, big_l, w};
    curve = bicm::bp_gexit_curve(ens, make_spec(c), kind, gopts, schedule, dopts, kopts);
    rate = bicm::sc_design_rate(ens);
  } else {
    const auto profile = bicm::DegreeProfile::regular(dl, dr);
    curve = bicm::bp_gexit_curve(profile, make_spec(c), kind, gopts, schedule, dopts, kopts);
    rate = profile.design_rate();
  }

  json result;
  result["curve"] = bicm::cli::curve_to_json(curve);
  try {
    const auto area = bicm::area_threshold(curve, rate);
    result["area_threshold"] = {{"alpha_bar", area.alpha_bar},
                                {"sigma", area.sigma},
                                {"ebn0_db", area.ebn0_db}};
    const std::string sc_label = sc.empty() ? "" : " sc " + sc;
    std::printf("gexit (%d,%d)%s %-6s %-4s : %zu points, area threshold alpha %.5f "
                "(Eb/N0 %.3f dB)\n",
                dl, dr, sc_label.c_str(), c.mod.c_str(), c.demapper.c_str(),
                curve.points.size(), area.alpha_bar, area.ebn0_db);
  } catch (const std::runtime_error& e) {
    result["area_threshold"] = nullptr;
    result["area_error"] = e.what();
    std::printf("gexit (%d,%d): %zu points, area threshold unavailable: %s\n", dl, dr,
                curve.points.size(), e.what());
  }
  if (!csv_path.empty()) bicm::cli::write_curve_csv(curve, csv_path);

  json config = common_config(c);
  config["ensemble"] = ensemble;
  config["sc"] = sc;
  config["alpha_grid"] = alpha_grid;
  config["phi_samples"] = phi_samples;
  config["kernel_samples"] = kernel_samples;
  config["grid"] = {{"max_llr", grid_max}, {"half_cells", grid_half}};
  emit(c, bicm::cli::make_envelope(config, c.seed, std::move(result)));
  return 0;
}

int run_table(const CommonOpts& c, const std::string& which, const std::string& preset,
              std::vector<std::string> mods, std::vector<std::string> channels,
              std::vector<std::string> ensembles, int id_period) {
  apply_threads(c);
  const bool paper = preset == "paper";
  const int big_l = paper ? 64 : 16;
  const int w = 4;
  const std::int64_t gmi_samples = paper ? 10'000'000 : 2'000'000;
  const std::int64_t phi_samples = paper ? 2'000'000 : 1'000'000;
  const bicm::GridSpec grid = paper ? bicm::GridSpec{30.0, 2048} : bicm::GridSpec{25.0, 1024};
  const int max_iters = paper ? 10000 : 4000;
  const double granularity = paper ? 0.02 : 0.05;

  const auto kind = which == "II" ? bicm::DemapperKind::MaxLogMap : bicm::DemapperKind::MapOptimal;
  if (mods.empty()) mods = {"qpsk", "16qam", "64qam"};
  if (channels.empty()) channels = {"awgn", "rayleigh"};
  if (ensembles.empty()) ensembles = {"3,6", "4,8", "6,12"};

  std::printf("Table %s (%s demapper, preset %s, L=%d w=%d)\n", which.c_str(),
              bicm::demapper_name(kind), preset.c_str(), big_l, w);
  std::printf("%-8s %-9s %-12s", "Mod.", "Chan.", "NoiseThr(dB)");
  for (const auto& e : ensembles) std::printf("  %-22s", ("(" + e + "," + std::to_string(big_l) + "," + std::to_string(w) + ")").c_str());
  std::printf("\n");

  json rows = json::array();
  for (const auto& mod : mods) {
    for (const auto& chan : channels) {
      CommonOpts rc = c;
      rc.mod = mod;
      rc.channel = chan;
      const auto spec = make_spec(rc);
      const auto noise =
          bicm::noise_threshold(spec, kind, 0.5, bicm::ThresholdMode::Gmi, gmi_samples, c.seed);
      std::printf("%-8s %-9s %-12.2f", mod.c_str(), chan.c_str(), noise.ebn0_db);
      std::fflush(stdout);
      json row{{"mod", mod}, {"channel", chan}, {"noise_threshold_db", noise.ebn0_db}};
      json per_ens = json::array();
      for (const auto& es : ensembles) {
        int dl, dr;
        parse_ensemble(es, dl, dr);
        const bicm::ScEnsemble ens{dl, dr, big_l, w};
        bicm::DeSchedule schedule;
        schedule.max_iters = max_iters;
        if (id_period > 0) {
          schedule.mode = bicm::DeSchedule::Mode::Id;
          schedule.id_period = id_period;
        }
        bicm::DeOptions opts;
        opts.grid = grid;
        opts.phi_samples = phi_samples;
        opts.seed = c.seed;
        const auto thr = bicm::sc_bp_threshold(ens, spec, kind, schedule, opts, granularity);
        const double gap = thr.ebn0_db - noise.ebn0_db;
        const double asympt = gap - bicm::sc_rate_loss_db(ens);
        std::printf("  %5.2f / %4.2f / %4.2f ", thr.ebn0_db, gap, asympt);
        std::fflush(stdout);
        per_ens.push_back({{"ensemble", es},
                           {"L", big_l},
                           {"w", w},
                           {"bp_threshold_db", thr.ebn0_db},
                           {"gap_db", gap},
                           {"asympt_gap_db", asympt},
                           {"design_rate", thr.design_rate}});
      }
      std::printf("\n");
      row["sc"] = std::move(per_ens);
      rows.push_back(std::move(row));
    }
  }
  json config = common_config(c);
  config["which"] = which;
  config["preset"] = preset;
  config["id_period"] = id_period;
  emit(c, bicm::cli::make_envelope(config, c.seed, json{{"rows", rows}}));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Achievable-rate limits, BP thresholds, and GEXIT area bounds for LDPC and "
               "spatially-coupled LDPC ensembles over BICM channels"};
  app.set_version_flag("--version", bicm::kVersion);
  app.set_config("--config", "", "Read options from a config file (flags override)");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  CommonOpts c_gmi, c_thr, c_sc, c_gexit, c_table;

  // gmi
  auto* gmi_cmd = app.add_subcommand(
      "gmi", "GMI / CM rates, or the noise threshold sigma* = I^-1(R) when --rate is given");
  add_common(gmi_cmd, c_gmi);
  double rate = -1.0, ebn0_db = -1e30, sigma = -1.0, alpha = -1.0;
  std::int64_t gmi_samples = 10'000'000;
  std::string gmi_mode = "gmi";
  gmi_cmd->add_option("--rate", rate, "Target rate in bits per channel bit");
  gmi_cmd->add_option("--samples", gmi_samples, "Monte-Carlo samples")->capture_default_str();
  gmi_cmd->add_option("--mode", gmi_mode, "Threshold mode: gmi (open loop) or cm (BICM-ID)")
      ->check(CLI::IsMember({"gmi", "cm"}))
      ->capture_default_str();
  auto* f_ebn0 = gmi_cmd->add_option("--ebn0-db", ebn0_db, "Operating point (rate-1/2 Eb/N0)");
  auto* f_sigma = gmi_cmd->add_option("--sigma", sigma, "Operating point (noise std-dev)");
  auto* f_alpha = gmi_cmd->add_option("--alpha", alpha, "Operating point (entropy per bit)");
  f_ebn0->excludes(f_sigma)->excludes(f_alpha);
  f_sigma->excludes(f_alpha);

  // threshold
  auto* thr_cmd = app.add_subcommand("threshold", "Flat-ensemble BP threshold (bisection)");
  add_common(thr_cmd, c_thr);
  std::string thr_ensemble = "3,6";
  int thr_id = 0, thr_iters = 2000, thr_half = 2048;
  std::int64_t thr_phi = 2'000'000;
  double thr_gridmax = 30.0, thr_gran = 0.01;
  thr_cmd->add_option("--ensemble", thr_ensemble, "Regular ensemble dl,dr")->capture_default_str();
  thr_cmd->add_option("--id-period", thr_id, "Demapper refresh period (0 = non-iterative)")
      ->capture_default_str();
  thr_cmd->add_option("--phi-samples", thr_phi, "Demapper density MC samples")->capture_default_str();
  thr_cmd->add_option("--max-iters", thr_iters, "DE iteration cap")->capture_default_str();
  thr_cmd->add_option("--grid-max-llr", thr_gridmax, "LLR grid range")->capture_default_str();
  thr_cmd->add_option("--grid-cells", thr_half, "LLR grid half cells")->capture_default_str();
  thr_cmd->add_option("--granularity-db", thr_gran, "Bisection resolution")->capture_default_str();

  // sc-threshold
  auto* sc_cmd = app.add_subcommand("sc-threshold", "Spatially-coupled BP threshold");
  add_common(sc_cmd, c_sc);
  std::string sc_ensemble = "3,6";
  int sc_l = 64, sc_w = 4, sc_id = 0, sc_iters = 10000, sc_half = 2048;
  std::int64_t sc_phi = 2'000'000, sc_gmi_samples = 2'000'000;
  double sc_gridmax = 30.0, sc_gran = 0.02, sc_noise_db = -1e30;
  sc_cmd->add_option("--ensemble", sc_ensemble, "Underlying regular ensemble dl,dr")
      ->capture_default_str();
  sc_cmd->add_option("--L", sc_l, "Coupling half-width")->capture_default_str();
  sc_cmd->add_option("--w", sc_w, "Smoothing window")->capture_default_str();
  sc_cmd->add_option("--id-period", sc_id, "Demapper refresh period (0 = non-iterative)")
      ->capture_default_str();
  sc_cmd->add_option("--phi-samples", sc_phi, "Demapper density MC samples")->capture_default_str();
  sc_cmd->add_option("--max-iters", sc_iters, "DE iteration cap")->capture_default_str();
  sc_cmd->add_option("--grid-max-llr", sc_gridmax, "LLR grid range")->capture_default_str();
  sc_cmd->add_option("--grid-cells", sc_half, "LLR grid half cells")->capture_default_str();
  sc_cmd->add_option("--granularity-db", sc_gran, "Bisection resolution")->capture_default_str();
  sc_cmd->add_option("--noise-threshold-db", sc_noise_db,
                     "Reuse a precomputed noise threshold for the gap columns");
  sc_cmd->add_option("--gmi-samples", sc_gmi_samples, "Samples for the gap's noise threshold")
      ->capture_default_str();

  // gexit
  auto* gx_cmd = app.add_subcommand("gexit", "BP-GEXIT curve and area threshold");
  add_common(gx_cmd, c_gexit);
  std::string gx_ensemble = "3,6", gx_sc, gx_csv;
  int gx_grid = 44, gx_iters = 2000, gx_half = 2048;
  std::int64_t gx_phi = 2'000'000, gx_kernel = 1'000'000;
  double gx_gridmax = 30.0;
  gx_cmd->add_option("--ensemble", gx_ensemble, "Regular ensemble dl,dr")->capture_default_str();
  gx_cmd->add_option("--sc", gx_sc, "Trace the coupled ensemble instead: L,w");
  gx_cmd->add_option("--alpha-grid", gx_grid, "Initial alpha sweep points")->capture_default_str();
  gx_cmd->add_option("--phi-samples", gx_phi, "Demapper density MC samples")->capture_default_str();
  gx_cmd->add_option("--kernel-samples", gx_kernel, "GEXIT kernel MC samples")
      ->capture_default_str();
  gx_cmd->add_option("--max-iters", gx_iters, "DE iteration cap per point")->capture_default_str();
  gx_cmd->add_option("--grid-max-llr", gx_gridmax, "LLR grid range")->capture_default_str();
  gx_cmd->add_option("--grid-cells", gx_half, "LLR grid half cells")->capture_default_str();
  gx_cmd->add_option("--csv", gx_csv, "Also write the curve as CSV (alpha,g,stderr)");

  // table
  auto* tb_cmd = app.add_subcommand("table", "Reproduce the threshold tables (long-running)");
  add_common(tb_cmd, c_table, false);
  std::string tb_which = "I", tb_preset = "fast";
  std::vector<std::string> tb_mods, tb_channels, tb_ensembles;
  int tb_id = 0;
  tb_cmd->add_option("--which", tb_which, "I (MAP demapper) or II (max-log-MAP)")
      ->check(CLI::IsMember({"I", "II"}))
      ->capture_default_str();
  tb_cmd->add_option("--preset", tb_preset, "fast (CI-scale, L=16) or paper (L=64, hours)")
      ->check(CLI::IsMember({"fast", "paper"}))
      ->capture_default_str();
  tb_cmd->add_option("--mods", tb_mods, "Restrict modulations");
  tb_cmd->add_option("--channels", tb_channels, "Restrict channels");
  tb_cmd->add_option("--ensembles", tb_ensembles, "Restrict ensembles (dl,dr entries)");
  tb_cmd->add_option("--id-period", tb_id, "Demapper refresh period (0 = non-iterative)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (gmi_cmd->parsed()) {
      const int noise_flags = static_cast<int>(f_ebn0->count() > 0) +
                              static_cast<int>(f_sigma->count() > 0) +
                              static_cast<int>(f_alpha->count() > 0);
      return run_gmi(c_gmi, rate, gmi_samples, gmi_mode, ebn0_db, sigma, alpha, noise_flags);
    }
    if (thr_cmd->parsed())
      return run_threshold(c_thr, thr_ensemble, thr_id, thr_phi, thr_iters, thr_gridmax,
                           thr_half, thr_gran);
    if (sc_cmd->parsed())
      return run_sc_threshold(c_sc, sc_ensemble, sc_l, sc_w, sc_id, sc_phi, sc_iters,
                              sc_gridmax, sc_half, sc_gran, sc_noise_db, sc_gmi_samples);
    if (gx_cmd->parsed())
      return run_gexit(c_gexit, gx_ensemble, gx_sc, gx_grid, gx_phi, gx_kernel, gx_iters,
                       gx_gridmax, gx_half, gx_csv);
    if (tb_cmd->parsed())
      return run_table(c_table, tb_which, tb_preset, tb_mods, tb_channels, tb_ensembles, tb_id);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNonconvergence;
  }
  return kExitConfig;
}
