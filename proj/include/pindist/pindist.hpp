#pragma once

// Umbrella header: exact pinned-distance counting and verification over
// odd-order finite fields.

#include "pindist/errors.hpp"
#include "pindist/field.hpp"
#include "pindist/space.hpp"
#include "pindist/point_set.hpp"
#include "pindist/geometry.hpp"
#include "pindist/pinned.hpp"
#include "pindist/rational.hpp"
#include "pindist/report.hpp"
#include "pindist/verify.hpp"
#include "pindist/setspec.hpp"
#include "pindist/runner.hpp"
