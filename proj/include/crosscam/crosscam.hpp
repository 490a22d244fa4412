#pragma once

#include "crosscam/camera.hpp"
#include "crosscam/cli.hpp"
#include "crosscam/detsim.hpp"
#include "crosscam/errors.hpp"
#include "crosscam/filter.hpp"
#include "crosscam/fusion.hpp"
#include "crosscam/geometry.hpp"
#include "crosscam/rng.hpp"
#include "crosscam/scenario.hpp"
#include "crosscam/server.hpp"
#include "crosscam/topology.hpp"
#include "crosscam/trust.hpp"
