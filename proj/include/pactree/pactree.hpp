#pragma once

#include "analysis.hpp"
#include "channel.hpp"
#include "code.hpp"
#include "common.hpp"
#include "construction.hpp"
#include "conv.hpp"
#include "crc.hpp"
#include "decoder_fano.hpp"
#include "decoder_sc.hpp"
#include "decoder_scl.hpp"
#include "decoder_stack.hpp"
#include "metrics.hpp"
#include "polar_kernel.hpp"
#include "sim.hpp"
