#include "cohvort/field_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace cohvort {

namespace {

template <typename Writer>
void write_to_path(const std::string& path, const Writer& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("io: cannot open " + path + " for writing");
  }
  writer(out);
  out.flush();
  if (!out) {
    throw std::runtime_error("io: write failed for " + path);
  }
}

double peak_density(const CoherenceField& field) {
  double peak = 0.0;
  for (const Complex& v : field.values()) {
    const double density = std::norm(v);
    if (std::isfinite(density) && density > peak) {
      peak = density;
    }
  }
  return peak;
}

std::uint8_t density_byte(double density, double peak) {
  if (!std::isfinite(density) || peak <= 0.0) {
    return 0;
  }
  const double scaled = 255.0 * density / peak;
  return static_cast<std::uint8_t>(std::lround(std::clamp(scaled, 0.0, 255.0)));
}

std::array<std::uint8_t, 3> hue_brightness_rgb(double hue, double brightness) {
  // hue in [0, 1), full saturation; standard HSV sector conversion.
  const double h6 = hue * 6.0;
  const int sector = static_cast<int>(h6) % 6;
  const double frac = h6 - std::floor(h6);
  const double v = std::clamp(brightness, 0.0, 1.0);
  const double p = 0.0;
  const double q = v * (1.0 - frac);
  const double t = v * frac;
  double r = 0.0, g = 0.0, b = 0.0;
  switch (sector) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
  }
  const auto byte = [](double channel) {
    return static_cast<std::uint8_t>(std::lround(255.0 * channel));
  };
  return {byte(r), byte(g), byte(b)};
}

}  // namespace

std::string format_sig17(double value) {
  std::array<char, 40> buffer;
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                    std::chars_format::scientific, 16);
  return std::string(buffer.data(), result.ptr);
}

void write_field_csv(std::ostream& out, const CoherenceField& field) {
  out << "x,xp,re_g,im_g,abs2_g,arg_g\n";
  const Axis& ax = field.x_axis();
  const Axis& axp = field.xp_axis();
  for (std::size_t i = 0; i < ax.count(); ++i) {
    for (std::size_t j = 0; j < axp.count(); ++j) {
      const Complex v = field.at(i, j);
      out << format_sig17(ax.at(i)) << ',' << format_sig17(axp.at(j)) << ','
          << format_sig17(v.real()) << ',' << format_sig17(v.imag()) << ','
          << format_sig17(std::norm(v)) << ',' << format_sig17(std::arg(v)) << '\n';
    }
  }
}

void write_field_csv(const std::string& path, const CoherenceField& field) {
  write_to_path(path, [&](std::ostream& out) { write_field_csv(out, field); });
}

void write_density_pgm(std::ostream& out, const CoherenceField& field) {
  const double peak = peak_density(field);
  out << "P5\n" << field.x_count() << ' ' << field.xp_count() << "\n255\n";
  for (std::size_t row = field.xp_count(); row-- > 0;) {
    for (std::size_t i = 0; i < field.x_count(); ++i) {
      out.put(static_cast<char>(density_byte(std::norm(field.at(i, row)), peak)));
    }
  }
}

void write_density_pgm(const std::string& path, const CoherenceField& field) {
  write_to_path(path, [&](std::ostream& out) { write_density_pgm(out, field); });
}

void write_phase_ppm(std::ostream& out, const CoherenceField& field) {
  const double peak = peak_density(field);
  out << "P6\n" << field.x_count() << ' ' << field.xp_count() << "\n255\n";
  for (std::size_t row = field.xp_count(); row-- > 0;) {
    for (std::size_t i = 0; i < field.x_count(); ++i) {
      const Complex v = field.at(i, row);
      const double density = std::norm(v);
      if (!std::isfinite(density) || peak <= 0.0) {
        out.put('\0').put('\0').put('\0');
        continue;
      }
      const double hue =
          (std::arg(v) + std::numbers::pi) / (2.0 * std::numbers::pi);
      const auto rgb = hue_brightness_rgb(std::clamp(hue, 0.0, 1.0 - 1e-12), density / peak);
      out.put(static_cast<char>(rgb[0]));
      out.put(static_cast<char>(rgb[1]));
      out.put(static_cast<char>(rgb[2]));
    }
  }
}

void write_phase_ppm(const std::string& path, const CoherenceField& field) {
  write_to_path(path, [&](std::ostream& out) { write_phase_ppm(out, field); });
}

void write_vortex_csv(std::ostream& out, const std::vector<VortexSite>& sites) {
  out << "x,xp,charge,source,residual\n";
  for (const VortexSite& site : sites) {
    out << format_sig17(site.x) << ',' << format_sig17(site.xp) << ',' << site.charge << ','
        << (site.source == SiteSource::kAnalytic ? "analytic" : "detected") << ',';
    if (site.residual.has_value()) {
      out << format_sig17(*site.residual);
    }
    out << '\n';
  }
}

void write_vortex_csv(const std::string& path, const std::vector<VortexSite>& sites) {
  write_to_path(path, [&](std::ostream& out) { write_vortex_csv(out, sites); });
}

void write_fringe_csv(std::ostream& out, const FringePattern& pattern) {
  out << "theta,intensity\n";
  for (std::size_t s = 0; s < pattern.theta.size(); ++s) {
    out << format_sig17(pattern.theta[s]) << ',' << format_sig17(pattern.intensity[s]) << '\n';
  }
}

void write_fringe_csv(const std::string& path, const FringePattern& pattern) {
  write_to_path(path, [&](std::ostream& out) { write_fringe_csv(out, pattern); });
}

void write_scan_csv(std::ostream& out, const RatchetScan& scan) {
  out << "step,x,xp,offset,cumulative_phase\n";
  for (std::size_t n = 0; n < scan.points.size(); ++n) {
    out << n << ',' << format_sig17(scan.points[n].x) << ',' << format_sig17(scan.points[n].xp)
        << ',' << format_sig17(scan.offsets[n]) << ',' << format_sig17(scan.cumulative[n])
        << '\n';
  }
}

void write_scan_csv(const std::string& path, const RatchetScan& scan) {
  write_to_path(path, [&](std::ostream& out) { write_scan_csv(out, scan); });
}

void write_match_csv(std::ostream& out, const std::vector<VortexSite>& analytic,
                     const std::vector<VortexSite>& detected, const MatchReport& report) {
  out << "analytic_x,analytic_xp,charge,detected_x,detected_xp,distance,matched\n";
  std::vector<const MatchPair*> pair_of_analytic(analytic.size(), nullptr);
  for (const MatchPair& pair : report.pairs) {
    pair_of_analytic[pair.analytic_index] = &pair;
  }
  for (std::size_t a = 0; a < analytic.size(); ++a) {
    out << format_sig17(analytic[a].x) << ',' << format_sig17(analytic[a].xp) << ','
        << analytic[a].charge << ',';
    if (const MatchPair* pair = pair_of_analytic[a]) {
      const VortexSite& partner = detected[pair->detected_index];
      out << format_sig17(partner.x) << ',' << format_sig17(partner.xp) << ','
          << format_sig17(pair->distance) << ",1\n";
    } else {
      out << ",,,0\n";
    }
  }
  for (const std::size_t d : report.unmatched_detected) {
    out << ",," << detected[d].charge << ',' << format_sig17(detected[d].x) << ','
        << format_sig17(detected[d].xp) << ",,0\n";
  }
}

void write_match_csv(const std::string& path, const std::vector<VortexSite>& analytic,
                     const std::vector<VortexSite>& detected, const MatchReport& report) {
  write_to_path(path, [&](std::ostream& out) { write_match_csv(out, analytic, detected, report); });
}

}  // namespace cohvort
