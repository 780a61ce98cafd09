#pragma once

// Umbrella header for the ZEBRA privacy-assessment library: score sets,
// oracle calibration, disclosure metrics, ECE profiles, file formats, and
// the synthetic-score validation harness.

#include "zebra/calibration.hpp"
#include "zebra/io.hpp"
#include "zebra/metrics.hpp"
#include "zebra/profile.hpp"
#include "zebra/simulate.hpp"
#include "zebra/types.hpp"
