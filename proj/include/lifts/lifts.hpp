#pragma once

// Umbrella header.

#include "lifts/bounds.hpp"
#include "lifts/canonical.hpp"
#include "lifts/experiment.hpp"
#include "lifts/graph.hpp"
#include "lifts/graph_io.hpp"
#include "lifts/lemma_checks.hpp"
#include "lifts/lift.hpp"
#include "lifts/magnification.hpp"
#include "lifts/permutation.hpp"
#include "lifts/spectral.hpp"
#include "lifts/tangles.hpp"
#include "lifts/walks.hpp"
