#pragma once

#include "engram/bits.hpp"
#include "engram/config.hpp"
#include "engram/cue_editor.hpp"
#include "engram/errors.hpp"
#include "engram/importance.hpp"
#include "engram/ltm.hpp"
#include "engram/machine.hpp"
#include "engram/nanocode.hpp"
#include "engram/scenario.hpp"
#include "engram/schema.hpp"
#include "engram/stm.hpp"
#include "engram/trace.hpp"
#include "engram/world.hpp"
