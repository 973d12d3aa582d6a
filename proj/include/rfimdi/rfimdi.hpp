#pragma once

// Umbrella header: certified key rates for measurement-device-independent
// key distribution with uncharacterized two-dimensional sources and a free
// reference frame. Pulls in the full analysis pipeline, the channel model,
// JSON I/O, the parameter sweep, and the ground-truth attack oracle.

#include "rfimdi/attack.hpp"
#include "rfimdi/channel.hpp"
#include "rfimdi/coefficients.hpp"
#include "rfimdi/common.hpp"
#include "rfimdi/inner_product.hpp"
#include "rfimdi/io.hpp"
#include "rfimdi/key_rate.hpp"
#include "rfimdi/phase_bounds.hpp"
#include "rfimdi/sweep.hpp"
#include "rfimdi/table.hpp"
