#pragma once

#include "purify/bell_state.hpp"
#include "purify/engine.hpp"
#include "purify/maps.hpp"
#include "purify/oracle.hpp"
#include "purify/protocols.hpp"
#include "purify/sampler.hpp"
