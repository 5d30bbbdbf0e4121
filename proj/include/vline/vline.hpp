#pragma once

#include "abel_solver.hpp"
#include "core.hpp"
#include "forward.hpp"
#include "gegenbauer.hpp"
#include "grid.hpp"
#include "harmonics.hpp"
#include "kernels.hpp"
#include "phantom.hpp"
#include "quadrature.hpp"
#include "radial_transform.hpp"
#include "reconstruct.hpp"
#include "sinogram.hpp"
