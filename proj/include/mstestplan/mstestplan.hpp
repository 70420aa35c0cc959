#pragma once

#include "mstestplan/model.hpp"
#include "mstestplan/itc02.hpp"
#include "mstestplan/wrapper.hpp"
#include "mstestplan/sharing.hpp"
#include "mstestplan/schedule.hpp"
#include "mstestplan/optimizer.hpp"
#include "mstestplan/report.hpp"
