#pragma once

#include "sdsi/baseline.hpp"
#include "sdsi/datapath.hpp"
#include "sdsi/experiment.hpp"
#include "sdsi/linear_online.hpp"
#include "sdsi/online.hpp"
#include "sdsi/oracle.hpp"
#include "sdsi/rational.hpp"
#include "sdsi/sd_number.hpp"
#include "sdsi/solver.hpp"
#include "sdsi/stability.hpp"
#include "sdsi/system.hpp"
#include "sdsi/trace_io.hpp"
