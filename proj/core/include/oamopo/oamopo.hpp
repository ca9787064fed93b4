#pragma once

#include "oamopo/adiabatic_sweep.hpp"
#include "oamopo/errors.hpp"
#include "oamopo/geometric_phase.hpp"
#include "oamopo/interference.hpp"
#include "oamopo/io.hpp"
#include "oamopo/mode_algebra.hpp"
#include "oamopo/opo_dynamics.hpp"
#include "oamopo/steady_state.hpp"
