#pragma once

#include "mstab/errors.hpp"
#include "mstab/rng.hpp"
#include "mstab/quadrature.hpp"
#include "mstab/measure.hpp"
#include "mstab/param_fn.hpp"
#include "mstab/kernels.hpp"
#include "mstab/stable.hpp"
#include "mstab/parallel.hpp"
#include "mstab/series.hpp"
#include "mstab/verification.hpp"
#include "mstab/io.hpp"
#include "mstab/config.hpp"
