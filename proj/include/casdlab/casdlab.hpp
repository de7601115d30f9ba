#pragma once

#include "casdlab/device.hpp"
#include "casdlab/engine.hpp"
#include "casdlab/error.hpp"
#include "casdlab/io.hpp"
#include "casdlab/latch.hpp"
#include "casdlab/mismatch.hpp"
#include "casdlab/netlist.hpp"
#include "casdlab/stats.hpp"
#include "casdlab/waveform.hpp"
