// pddqsl.hpp: umbrella header

#pragma once

#include "pddqsl/correlations.hpp"
#include "pddqsl/dynamics.hpp"
#include "pddqsl/errors.hpp"
#include "pddqsl/pulses.hpp"
#include "pddqsl/qsl.hpp"
#include "pddqsl/scenario.hpp"
#include "pddqsl/spectral.hpp"
#include "pddqsl/verify.hpp"
