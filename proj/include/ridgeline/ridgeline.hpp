#pragma once

// Umbrella header: geospatial density ridge estimation via thresholded
// subspace-constrained mean shift, with envelope-coverage evaluation.

#include "ridgeline/density.hpp"
#include "ridgeline/errors.hpp"
#include "ridgeline/eval.hpp"
#include "ridgeline/geo.hpp"
#include "ridgeline/ingest.hpp"
#include "ridgeline/io.hpp"
#include "ridgeline/linalg.hpp"
#include "ridgeline/manifest.hpp"
#include "ridgeline/parallel.hpp"
#include "ridgeline/rng.hpp"
#include "ridgeline/scms.hpp"
#include "ridgeline/stats.hpp"
#include "ridgeline/synth.hpp"
