#pragma once

#include "vkd/airy.hpp"
#include "vkd/calibrate.hpp"
#include "vkd/continuation.hpp"
#include "vkd/energy.hpp"
#include "vkd/errors.hpp"
#include "vkd/flows.hpp"
#include "vkd/grid.hpp"
#include "vkd/io.hpp"
#include "vkd/mountain_pass.hpp"
#include "vkd/operators.hpp"
#include "vkd/spectral.hpp"
#include "vkd/version.hpp"
#include "vkd/yoshimura.hpp"
