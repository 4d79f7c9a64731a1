#pragma once

#include "analysis.hpp"
#include "answers.hpp"
#include "errors.hpp"
#include "estimation.hpp"
#include "experiment.hpp"
#include "figures.hpp"
#include "fusion.hpp"
#include "io.hpp"
#include "model.hpp"
#include "numeric.hpp"
#include "offline.hpp"
#include "oracle.hpp"
#include "rng.hpp"
#include "version.hpp"
#include "weights.hpp"
