#pragma once

#include "ltm/braid.hpp"
#include "ltm/config.hpp"
#include "ltm/core.hpp"
#include "ltm/error.hpp"
#include "ltm/kinks.hpp"
#include "ltm/linalg.hpp"
#include "ltm/material_line.hpp"
#include "ltm/unstable_manifold.hpp"
