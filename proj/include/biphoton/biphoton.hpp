/// Convenience include for the full library.
#pragma once

#include "biphoton/polarization.hpp"
#include "biphoton/source.hpp"
#include "biphoton/interferometer.hpp"
#include "biphoton/rng.hpp"
#include "biphoton/counting.hpp"
#include "biphoton/sweep_io.hpp"
#include "biphoton/fitting.hpp"
#include "biphoton/scenario.hpp"
