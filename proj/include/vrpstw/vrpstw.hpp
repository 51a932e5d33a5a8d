#pragma once

#include "vrpstw/baseline.hpp"
#include "vrpstw/batch.hpp"
#include "vrpstw/compare.hpp"
#include "vrpstw/cost.hpp"
#include "vrpstw/error.hpp"
#include "vrpstw/ga.hpp"
#include "vrpstw/instance_io.hpp"
#include "vrpstw/model.hpp"
#include "vrpstw/oracle.hpp"
#include "vrpstw/random.hpp"
#include "vrpstw/report.hpp"
#include "vrpstw/svg.hpp"
