#pragma once
#include <vector>

#include "spiraldim/spirals.hpp"

namespace spiraldim {

struct SectorOptions {
  int sectors = 1000;           // angular sectors per turn
  double eps_log10 = -10000.0;  // neighborhood width 10^{eps_log10}
  int digits = 50;              // log-domain working precision (up to 100)
  bool exact_winding_offset = true;  // keep phi_j + P/K inside the offset
  int workers = 0;              // 0: library default
};

struct SectorResult {
  double dimension = 0.0;
  int argmax_sector = 0;
  std::vector<double> per_sector;
};

// Single-sector diagnostics; everything potentially astronomical is
// reported in the log10 domain.
struct SectorProbe {
  double dimension = 0.0;
  double log10_area = 0.0;
  double log10_k1 = 0.0;    // resolved winding count
  double log10_r_k1 = 0.0;  // nucleus radius
};

// Box dimension of the focus trajectory through (r0, phi0) from the decay
// law of its eps-neighborhood area, evaluated sector by sector entirely in
// the log domain. Requires the classical family (m == n) with k >= 1.
SectorResult estimate_dimension(const FocusParams& p, double r0, double phi0,
                                const SectorOptions& opt = {});

SectorProbe sector_probe(const FocusParams& p, double r0, double phi0, int j,
                         const SectorOptions& opt = {});

}  // namespace spiraldim
