#pragma once

#include "dchaos/blocks.hpp"
#include "dchaos/classify.hpp"
#include "dchaos/density.hpp"
#include "dchaos/entropy.hpp"
#include "dchaos/error.hpp"
#include "dchaos/random.hpp"
#include "dchaos/system_forge.hpp"
#include "dchaos/zero_entropy.hpp"
