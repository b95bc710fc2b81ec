#pragma once

#include "wardclust/analysis.hpp"
#include "wardclust/core.hpp"
#include "wardclust/criteria.hpp"
#include "wardclust/engine.hpp"
#include "wardclust/experiments.hpp"
#include "wardclust/io.hpp"
#include "wardclust/linkage.hpp"
#include "wardclust/oracle.hpp"
