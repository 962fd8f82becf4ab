#pragma once

#include "combodose/benchmark.hpp"
#include "combodose/blrm.hpp"
#include "combodose/boin12.hpp"
#include "combodose/calibrate.hpp"
#include "combodose/core.hpp"
#include "combodose/datagen.hpp"
#include "combodose/design.hpp"
#include "combodose/engine.hpp"
#include "combodose/io.hpp"
#include "combodose/joint_outcome.hpp"
#include "combodose/metrics.hpp"
#include "combodose/pocrm.hpp"
#include "combodose/posterior.hpp"
#include "combodose/rules.hpp"
#include "combodose/sampler.hpp"
#include "combodose/scenarios.hpp"
#include "combodose/stats.hpp"
