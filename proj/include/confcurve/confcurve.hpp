#pragma once

// Umbrella header for the conformal omega-curve toolkit.

#include "confcurve/alternating_form.hpp"
#include "confcurve/blowdown.hpp"
#include "confcurve/calibration.hpp"
#include "confcurve/curve.hpp"
#include "confcurve/frame.hpp"
#include "confcurve/growth.hpp"
#include "confcurve/linalg.hpp"
#include "confcurve/multi_index.hpp"
#include "confcurve/rng.hpp"
#include "confcurve/sampling.hpp"
