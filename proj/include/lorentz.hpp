#pragma once

#include "lorentz/automorphism.hpp"
#include "lorentz/common.hpp"
#include "lorentz/linalg_kernels.hpp"
#include "lorentz/random.hpp"
#include "lorentz/spin_algebra.hpp"
