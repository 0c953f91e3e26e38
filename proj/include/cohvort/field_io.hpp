#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cohvort/coherence.hpp"
#include "cohvort/fringes.hpp"
#include "cohvort/singularity.hpp"

namespace cohvort {

/// Locale-independent scientific notation with 17 significant digits, which
/// round-trips every finite double exactly.
std::string format_sig17(double value);

/// Columns x, xp, re_g, im_g, abs2_g, arg_g; row-major in x then x'.
void write_field_csv(std::ostream& out, const CoherenceField& field);
void write_field_csv(const std::string& path, const CoherenceField& field);

/// 8-bit binary PGM of |G|^2 with the peak normalized to 255. Rows run from
/// the top of the window (largest x') down, columns left to right in x.
void write_density_pgm(std::ostream& out, const CoherenceField& field);
void write_density_pgm(const std::string& path, const CoherenceField& field);

/// 8-bit binary PPM phase map: hue from arg G over (-pi, pi], brightness from
/// |G|^2 relative to the peak. Same orientation as the density map.
void write_phase_ppm(std::ostream& out, const CoherenceField& field);
void write_phase_ppm(const std::string& path, const CoherenceField& field);

/// Columns x, xp, charge, source, residual; callers pass sites already sorted
/// by (x, x'). A missing residual leaves its cell empty.
void write_vortex_csv(std::ostream& out, const std::vector<VortexSite>& sites);
void write_vortex_csv(const std::string& path, const std::vector<VortexSite>& sites);

/// Columns theta, intensity.
void write_fringe_csv(std::ostream& out, const FringePattern& pattern);
void write_fringe_csv(const std::string& path, const FringePattern& pattern);

/// Columns step, x, xp, offset, cumulative_phase.
void write_scan_csv(std::ostream& out, const RatchetScan& scan);
void write_scan_csv(const std::string& path, const RatchetScan& scan);

/// One row per analytic site with its detected partner (empty columns when
/// unmatched), then one row per detected site no analytic site claimed.
void write_match_csv(std::ostream& out, const std::vector<VortexSite>& analytic,
                     const std::vector<VortexSite>& detected, const MatchReport& report);
void write_match_csv(const std::string& path, const std::vector<VortexSite>& analytic,
                     const std::vector<VortexSite>& detected, const MatchReport& report);

}  // namespace cohvort
