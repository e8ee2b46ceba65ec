#pragma once

#include "rrix/dynamic_rlbwt.hpp"
#include "rrix/errors.hpp"
#include "rrix/lz77.hpp"
#include "rrix/matching_statistics.hpp"
#include "rrix/r_index.hpp"
#include "rrix/results.hpp"
#include "rrix/run_sequence.hpp"
#include "rrix/serialization.hpp"
#include "rrix/symbols.hpp"
#include "rrix/text.hpp"
#include "rrix/toehold.hpp"
