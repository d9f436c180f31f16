#pragma once

// Umbrella header for the whole library.

#include "dimerscat/assembly.hpp"
#include "dimerscat/config.hpp"
#include "dimerscat/effective.hpp"
#include "dimerscat/errors.hpp"
#include "dimerscat/fields.hpp"
#include "dimerscat/geometry.hpp"
#include "dimerscat/incident.hpp"
#include "dimerscat/kernels.hpp"
#include "dimerscat/materials.hpp"
#include "dimerscat/reports.hpp"
#include "dimerscat/solver.hpp"
#include "dimerscat/types.hpp"
