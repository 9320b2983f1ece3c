// Umbrella header.
#pragma once

#include "effsec/capacity.hpp"
#include "effsec/channel_io.hpp"
#include "effsec/code.hpp"
#include "effsec/core.hpp"
#include "effsec/detect.hpp"
#include "effsec/info.hpp"
#include "effsec/prob.hpp"
#include "effsec/scenarios.hpp"
#include "effsec/version.hpp"
