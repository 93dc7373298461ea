#pragma once

#include "wiregraph/raster.hpp"

namespace wiregraph {

/// Zhang-Suen iterative thinning to a one-pixel wide, 8-connected skeleton.
/// Pixels outside the map count as background.
BitMap thin_zhang_suen(const BitMap& map);

}  // namespace wiregraph
