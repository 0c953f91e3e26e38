#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cohvort/coherence.hpp"
#include "cohvort/field_io.hpp"
#include "cohvort/fringes.hpp"
#include "cohvort/potential.hpp"
#include "cohvort/reproduction.hpp"
#include "cohvort/scattering.hpp"
#include "cohvort/singularity.hpp"

using namespace cohvort;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string::size_type begin = 0;
  while (true) {
    const auto end = text.find(sep, begin);
    parts.push_back(text.substr(begin, end - begin));
    if (end == std::string::npos) {
      return parts;
    }
    begin = end + 1;
  }
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw std::invalid_argument("cli: cannot parse " + what + " from '" + text + "'");
  }
  return value;
}

struct AxisSpec {
  double min;
  double max;
  std::size_t count;
};

AxisSpec parse_axis_spec(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) {
    throw std::invalid_argument("cli: window spec must be MIN:MAX:N, got '" + text + "'");
  }
  const double count = parse_double(parts[2], "grid count");
  if (!(count >= 2.0) || count != std::floor(count) || count > 1e7) {
    throw std::invalid_argument("cli: grid count must be an integer of at least 2, got '" +
                                parts[2] + "'");
  }
  return {parse_double(parts[0], "window minimum"), parse_double(parts[1], "window maximum"),
          static_cast<std::size_t>(count)};
}

struct CommonArgs {
  double k = 1.0;
  double energy = 1.0;
  double step_ratio = 0.99;
  std::vector<double> breakpoints;
  std::vector<double> heights;
  std::vector<double> weights{1.0, 1.0};
  std::vector<std::string> window;
  double eps_g = 1e-12;
  double eps_zero = 1e-8;
  std::string out_dir = "out";

  CLI::Option* k_opt = nullptr;
  CLI::Option* energy_opt = nullptr;
  CLI::Option* step_opt = nullptr;
  CLI::Option* breakpoints_opt = nullptr;
};

void add_common_options(CLI::App* cmd, CommonArgs& args, bool window_required,
                        bool allow_lists) {
  args.k_opt = cmd->add_option("--k", args.k, "incident wavenumber; energy = k^2");
  args.energy_opt =
      cmd->add_option("--energy", args.energy, "incident energy; k = sqrt(energy)");
  args.energy_opt->excludes(args.k_opt);
  args.step_opt =
      cmd->add_option("--step", args.step_ratio, "step height at the origin as a fraction V/E");
  if (allow_lists) {
    args.breakpoints_opt = cmd->add_option("--breakpoints", args.breakpoints,
                                           "region boundaries, strictly increasing");
    auto* heights_opt = cmd->add_option(
        "--heights", args.heights, "region heights in energy units, one more than breakpoints");
    args.step_opt->excludes(args.breakpoints_opt);
    args.step_opt->excludes(heights_opt);
    args.breakpoints_opt->needs(heights_opt);
    heights_opt->needs(args.breakpoints_opt);
  }
  cmd->add_option("--weights", args.weights,
                  "statistical weights: free member, scattered member")
      ->expected(2);
  auto* window_opt = cmd->add_option(
      "--window", args.window, "sampling grids as XMIN:XMAX:N XPMIN:XPMAX:N");
  window_opt->expected(2);
  if (window_required) {
    window_opt->required();
  }
  cmd->add_option("--eps-g", args.eps_g, "degeneracy threshold relative to max |G|")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--eps-zero", args.eps_zero, "zero-residual threshold relative to max |G|")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", args.out_dir, "output directory");
}

struct ResolvedRun {
  double energy;
  double k;
  PotentialProfile profile;
  Ensemble ensemble;
  Axis x_axis;
  Axis xp_axis;
  DetectOptions detect;
  std::filesystem::path out;
};

ResolvedRun resolve_run(const CommonArgs& args) {
  double energy = 0.0;
  double k = 0.0;
  if (args.energy_opt->count() > 0) {
    energy = args.energy;
    if (!std::isfinite(energy) || !(energy > 0.0)) {
      throw std::invalid_argument("cli: --energy must be positive");
    }
    k = std::sqrt(energy);
  } else {
    k = args.k;
    if (!std::isfinite(k) || !(k > 0.0)) {
      throw std::invalid_argument("cli: --k must be positive");
    }
    energy = k * k;
  }

  const bool lists_given =
      args.breakpoints_opt != nullptr && args.breakpoints_opt->count() > 0;
  PotentialProfile profile = lists_given
                                 ? PotentialProfile(args.breakpoints, args.heights)
                                 : PotentialProfile::step(args.step_ratio * energy);

  if (args.window.size() != 2) {
    throw std::invalid_argument("cli: --window needs XMIN:XMAX:N and XPMIN:XPMAX:N");
  }
  const AxisSpec xs = parse_axis_spec(args.window[0]);
  const AxisSpec xps = parse_axis_spec(args.window[1]);

  DetectOptions detect;
  detect.eps_g_rel = args.eps_g;
  detect.eps_zero_rel = args.eps_zero;

  std::filesystem::path out(args.out_dir);
  std::filesystem::create_directories(out);

  Ensemble ensemble = two_member_mixture(profile, energy, args.weights[0], args.weights[1]);
  return ResolvedRun{energy,
                     k,
                     std::move(profile),
                     std::move(ensemble),
                     Axis(xs.min, xs.max, xs.count),
                     Axis(xps.min, xps.max, xps.count),
                     detect,
                     std::move(out)};
}

/// Transmitted-side wavevector of the scattered member; 0 when evanescent.
double transmitted_wavenumber(const ResolvedRun& run) {
  const Complex q = run.ensemble.members().back().wavevectors().back();
  return q.imag() == 0.0 ? q.real() : 0.0;
}

bool is_origin_step(const PotentialProfile& profile, double energy) {
  return profile.region_count() == 2 && profile.heights()[0] == 0.0 &&
         profile.breakpoints()[0] == 0.0 && profile.heights()[1] > 0.0 &&
         profile.heights()[1] < energy;
}

void warn_if_coarse(const ResolvedRun& run) {
  const double period = shortest_phase_period(run.k, transmitted_wavenumber(run));
  const double spacing = std::max(run.x_axis.spacing(), run.xp_axis.spacing());
  if (spacing > period / 8.0) {
    std::cerr << "warning: grid spacing " << spacing << " exceeds 1/8 of the shortest phase period "
              << period << "; windings may alias\n";
  }
}

int run_field(const CommonArgs& args, bool normalized) {
  ResolvedRun run = resolve_run(args);
  CoherenceField field = sample_grid(run.ensemble, run.x_axis, run.xp_axis);
  if (normalized) {
    field = normalize(run.ensemble, field);
  }
  write_field_csv((run.out / "field.csv").string(), field);
  write_density_pgm((run.out / "density.pgm").string(), field);
  write_phase_ppm((run.out / "phase.ppm").string(), field);
  std::cout << "wrote field.csv, density.pgm, phase.ppm to " << run.out.string() << '\n';

  if (!(run.x_axis == run.xp_axis)) {
    return 0;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < field.x_count(); ++i) {
    for (std::size_t j = 0; j < field.xp_count(); ++j) {
      const Complex deviation = field.at(i, j) - std::conj(field.at(j, i));
      const double magnitude = std::abs(deviation);
      if (std::isfinite(magnitude)) {
        worst = std::max(worst, magnitude);
      }
    }
  }
  const double bound = 1e-12 * field.max_abs();
  const bool ok = worst <= bound;
  std::cout << (ok ? "[PASS]" : "[FAIL]")
            << " hermiticity on the symmetric window: max deviation " << worst << " (bound "
            << bound << ")\n";
  return ok ? 0 : 1;
}

int run_vortices(const CommonArgs& args) {
  ResolvedRun run = resolve_run(args);
  warn_if_coarse(run);
  const CoherenceField field = sample_grid(run.ensemble, run.x_axis, run.xp_axis);
  const std::vector<VortexSite> detected = detect(field, run.ensemble, run.detect);
  write_vortex_csv((run.out / "vortices_detected.csv").string(), detected);
  std::cout << "detected " << detected.size() << " singularities; wrote vortices_detected.csv\n";

  if (!is_origin_step(run.profile, run.energy)) {
    std::cout << "closed-form lattice unavailable for this potential; detected catalog only\n";
    return 0;
  }

  const double q = transmitted_wavenumber(run);
  const Window window{run.x_axis.min(), run.x_axis.max(), run.xp_axis.min(), run.xp_axis.max()};
  std::vector<VortexSite> analytic = analytic_lattice(run.k, q, +1, window);
  const std::vector<VortexSite> conjugates = analytic_lattice(run.k, q, -1, window);
  analytic.insert(analytic.end(), conjugates.begin(), conjugates.end());
  std::sort(analytic.begin(), analytic.end(), [](const VortexSite& a, const VortexSite& b) {
    return a.x != b.x ? a.x < b.x : a.xp < b.xp;
  });
  write_vortex_csv((run.out / "vortices_analytic.csv").string(), analytic);

  const double tolerance = std::max(run.x_axis.spacing(), run.xp_axis.spacing());
  const MatchReport report = match_sites(analytic, detected, tolerance);
  write_match_csv((run.out / "match_report.csv").string(), analytic, detected, report);

  const bool ok = report.unmatched_analytic.empty() && report.unmatched_detected.empty();
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " lattice match: " << report.pairs.size() << " of "
            << analytic.size() << " closed-form sites paired, " << report.unmatched_detected.size()
            << " unexplained detections, max distance " << report.max_distance << " (tolerance "
            << tolerance << ")\n";
  return ok ? 0 : 1;
}

int run_fringes(const CommonArgs& args, const std::string& center_spec, double half_side,
                std::size_t loop_samples, const std::string& screen_spec) {
  ResolvedRun run = resolve_run(args);
  const CoherenceField field = sample_grid(run.ensemble, run.x_axis, run.xp_axis);

  double cx = 0.0;
  double cxp = 0.0;
  int expected_charge = 0;
  if (!center_spec.empty()) {
    const auto parts = split(center_spec, ':');
    if (parts.size() != 2) {
      throw std::invalid_argument("cli: --center must be X:XP");
    }
    cx = parse_double(parts[0], "loop center x");
    cxp = parse_double(parts[1], "loop center x'");
  } else {
    const std::vector<VortexSite> detected = detect(field, run.ensemble, run.detect);
    if (detected.empty()) {
      throw std::runtime_error("cli: no singularity found in the window; pass --center X:XP");
    }
    const double mid_x = 0.5 * (run.x_axis.min() + run.x_axis.max());
    const double mid_xp = 0.5 * (run.xp_axis.min() + run.xp_axis.max());
    const VortexSite* best = &detected.front();
    double best_distance = std::hypot(best->x - mid_x, best->xp - mid_xp);
    for (const VortexSite& site : detected) {
      const double distance = std::hypot(site.x - mid_x, site.xp - mid_xp);
      if (distance < best_distance) {
        best_distance = distance;
        best = &site;
      }
    }
    cx = best->x;
    cxp = best->xp;
    expected_charge = best->charge;
    std::cout << "loop centered on the detected charge " << expected_charge << " site at (" << cx
              << ", " << cxp << ")\n";
  }

  if (!(half_side > 0.0)) {
    half_side = 0.3 * shortest_phase_period(run.k, transmitted_wavenumber(run));
  }
  const AxisSpec screen = parse_axis_spec(screen_spec);
  const Axis screen_axis(screen.min, screen.max, screen.count);

  const std::vector<LoopPoint> loop = square_loop(cx, cxp, half_side, loop_samples);
  for (std::size_t corner = 0; corner < 4; ++corner) {
    const LoopPoint& at = loop[corner * loop_samples];
    const FringePattern fringe = pattern(run.ensemble, at.x, at.xp, screen_axis);
    std::ostringstream name;
    name << "fringe_corner_" << corner << ".csv";
    write_fringe_csv((run.out / name.str()).string(), fringe);
  }
  const RatchetScan scan = ratchet_scan(run.ensemble, loop, run.detect.eps_g_rel);
  write_scan_csv((run.out / "ratchet_scan.csv").string(), scan);
  std::cout << "wrote fringe_corner_0..3.csv and ratchet_scan.csv to " << run.out.string() << '\n';
  std::cout << "accumulated offset " << scan.total << " rad = 2 pi * " << scan.winding << '\n';

  if (center_spec.empty()) {
    const FringePattern core = pattern(run.ensemble, cx, cxp, screen_axis);
    const bool charge_ok = scan.winding == expected_charge;
    const bool visibility_ok = core.visibility < 1e-6;
    std::cout << (charge_ok ? "[PASS]" : "[FAIL]") << " loop winding equals the site charge\n";
    std::cout << (visibility_ok ? "[PASS]" : "[FAIL]") << " core visibility " << core.visibility
              << " below 1e-6\n";
    return charge_ok && visibility_ok ? 0 : 1;
  }
  return 0;
}

int run_reference_lattice(const CommonArgs& args, bool with_field_csv) {
  LatticeRunOptions options;
  if (args.energy_opt->count() > 0) {
    options.energy = args.energy;
  } else {
    options.energy = args.k * args.k;
  }
  options.v_over_e = args.step_ratio;
  options.weight_free = args.weights[0];
  options.weight_scattered = args.weights[1];
  options.detect.eps_g_rel = args.eps_g;
  options.detect.eps_zero_rel = args.eps_zero;
  if (!args.window.empty()) {
    if (args.window.size() != 2) {
      throw std::invalid_argument("cli: --window needs XMIN:XMAX:N and XPMIN:XPMAX:N");
    }
    const AxisSpec xs = parse_axis_spec(args.window[0]);
    const AxisSpec xps = parse_axis_spec(args.window[1]);
    options.window = Window{xs.min, xs.max, xps.min, xps.max};
    options.x_count = xs.count;
    options.xp_count = xps.count;
  }

  const std::filesystem::path out(args.out_dir);
  std::filesystem::create_directories(out);

  const LatticeRunReport report = run_step_lattice(options);
  write_density_pgm((out / "density.pgm").string(), report.field);
  write_phase_ppm((out / "phase.ppm").string(), report.field);
  write_vortex_csv((out / "vortices_detected.csv").string(), report.detected);
  write_vortex_csv((out / "vortices_analytic.csv").string(), report.analytic);
  write_match_csv((out / "match_report.csv").string(), report.analytic, report.detected,
                  report.match);
  if (with_field_csv) {
    write_field_csv((out / "field.csv").string(), report.field);
  }

  std::ostringstream summary;
  const auto line = [&summary](bool ok, const std::string& text) {
    summary << (ok ? "[PASS] " : "[FAIL] ") << text << '\n';
  };
  {
    std::ostringstream text;
    text << "all " << report.analytic.size() << " closed-form sites matched ("
         << report.match.pairs.size() << " pairs, max distance " << report.match.max_distance
         << ", tolerance " << report.match_tolerance << ")";
    line(report.all_analytic_matched, text.str());
  }
  {
    std::ostringstream text;
    text << "no unexplained detections (" << report.match.unmatched_detected.size()
         << " unmatched of " << report.detected.size() << " detected)";
    line(report.no_extra_detected, text.str());
  }
  {
    std::ostringstream text;
    text << "x spacing " << report.x_spacing_expected << ": max relative deviation "
         << report.x_spacing_max_rel_dev;
    line(report.x_spacing_ok, text.str());
  }
  {
    std::ostringstream text;
    text << "x' spacing " << report.xp_spacing_expected << ": max relative deviation "
         << report.xp_spacing_max_rel_dev;
    line(report.xp_spacing_ok, text.str());
  }
  {
    std::ostringstream text;
    text << "closed-form residuals below bound (max " << report.max_analytic_residual
         << " vs " << report.residual_bound << ")";
    line(report.analytic_residuals_ok, text.str());
  }
  {
    std::ostringstream text;
    text << "every detected site refined below the zero threshold (max residual "
         << report.max_detected_residual << ")";
    line(report.detected_converged, text.str());
  }
  summary << "detected " << report.vortex_count << " vortices and " << report.antivortex_count
          << " antivortices\n";
  summary << (report.passed() ? "[PASS]" : "[FAIL]") << " reference lattice reproduction\n";

  std::cout << summary.str();
  std::ofstream summary_file((out / "summary.txt").string(), std::ios::binary);
  if (!summary_file) {
    throw std::runtime_error("io: cannot open " + (out / "summary.txt").string() +
                             " for writing");
  }
  summary_file << summary.str();
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-point coherence maps and quantized vortex detection for 1-D scattering mixtures"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a key=value file");

  int exit_code = 0;

  CommonArgs field_args;
  bool field_normalized = false;
  CLI::App* field_cmd =
      app.add_subcommand("field", "sample G(x,x') and export CSV plus density/phase pixmaps");
  add_common_options(field_cmd, field_args, true, true);
  field_cmd->add_flag("--normalized", field_normalized,
                      "export the degree of coherence instead of raw G");
  field_cmd->callback([&] { exit_code = run_field(field_args, field_normalized); });

  CommonArgs vortex_args;
  CLI::App* vortex_cmd = app.add_subcommand(
      "vortices", "detect phase singularities and compare with the closed-form step lattice");
  add_common_options(vortex_cmd, vortex_args, true, true);
  vortex_cmd->callback([&] { exit_code = run_vortices(vortex_args); });

  CommonArgs fringe_args;
  std::string fringe_center;
  double fringe_half_side = 0.0;
  std::size_t fringe_samples = 40;
  std::string fringe_screen = "-6.283185307179586:6.283185307179586:401";
  CLI::App* fringe_cmd = app.add_subcommand(
      "fringes", "two-slit fringe patterns around a vortex and the loop ratchet scan");
  add_common_options(fringe_cmd, fringe_args, true, true);
  fringe_cmd->add_option("--center", fringe_center,
                         "loop center X:XP (default: detected site nearest the window center)");
  fringe_cmd->add_option("--half-side", fringe_half_side,
                         "loop half side (default 0.3 of the shortest phase period)");
  fringe_cmd->add_option("--loop-samples", fringe_samples, "loop samples per side")
      ->check(CLI::PositiveNumber);
  fringe_cmd->add_option("--screen", fringe_screen, "screen grid as MIN:MAX:N");
  fringe_cmd->callback([&] {
    exit_code = run_fringes(fringe_args, fringe_center, fringe_half_side, fringe_samples,
                            fringe_screen);
  });

  CommonArgs repro_args;
  bool repro_field_csv = false;
  CLI::App* repro_cmd = app.add_subcommand(
      "reproduce-fig5",
      "reference run: step V/E = 0.99 at k = 1, vortex lattice detection and cross-validation");
  add_common_options(repro_cmd, repro_args, false, false);
  repro_cmd->add_flag("--field-csv", repro_field_csv,
                      "also export the full field CSV (large at the default grid)");
  repro_cmd->callback([&] { exit_code = run_reference_lattice(repro_args, repro_field_csv); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return exit_code;
}
