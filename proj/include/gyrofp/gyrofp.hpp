#pragma once
// Umbrella header.

#include "gyrofp/bessel.hpp"
#include "gyrofp/config.hpp"
#include "gyrofp/csv.hpp"
#include "gyrofp/diagnostics.hpp"
#include "gyrofp/errors.hpp"
#include "gyrofp/fft.hpp"
#include "gyrofp/harness4d.hpp"
#include "gyrofp/initial.hpp"
#include "gyrofp/norms.hpp"
#include "gyrofp/snapshot.hpp"
#include "gyrofp/solver.hpp"
#include "gyrofp/spectral_field.hpp"
#include "gyrofp/spectral_ops.hpp"
#include "gyrofp/stability.hpp"
#include "gyrofp/u_operator.hpp"
#include "gyrofp/velocity_grid.hpp"
#include "gyrofp/version.hpp"
