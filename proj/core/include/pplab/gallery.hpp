#pragma once

#include <map>
#include <string>

#include "pplab/grid.hpp"
#include "pplab/wstar.hpp"

namespace pplab {

struct KnownFact {
  std::string name;
  double value = 0.0;
  double rel_tol = 0.0;
  std::string oracle;  // how the value was derived / should be cross-checked
};

struct GalleryInstance {
  std::string name;
  WStarPair pair;
  std::vector<KnownFact> facts;
  double alpha_min = 1.0, alpha_max = 2.0;  // admissible range, right-open
};

using GalleryParams = std::map<std::string, double>;

struct GalleryEntryInfo {
  std::string name;
  std::string summary;
  std::vector<std::string> params;  // accepted keys with defaults in the summary
  bool k1 = true, k2 = true;
};

std::vector<GalleryEntryInfo> gallery_list();

/// Sample a registered analytic pair on the grid. Log-type entries mark
/// nodes within 2h of their singularity as undefined.
GalleryInstance gallery_instantiate(const std::string& name, const GridDomain& g,
                                    const GalleryParams& params = {});

struct Alpha2Row {
  double r;
  double circle_mean;   // M(r): angular mean of -phi^alpha on |z| = r
  double ratio;         // |M(r)| / log(1/r^2)
  double oracle_ratio;  // (2 log(1/r))^{beta-1}
};

struct Alpha2Witness {
  double beta = 0.0;
  bool inconclusive = false;  // beta <= 1: the circle-mean test proves nothing
  bool strictly_increasing = false;
  double max_rel_err = 0.0;  // ratio vs oracle
  std::vector<Alpha2Row> rows;
};

/// Divergence witness for the alpha > 2 failure: circle means of
/// -((-log|z|^2)^{1/2-delta})^alpha against log(1/r); a subharmonic
/// majorant would force this ratio to stay bounded.
Alpha2Witness alpha2_failure_witness(const GridDomain& g, double delta, double alpha,
                                     const std::vector<double>& r_list);

}  // namespace pplab
