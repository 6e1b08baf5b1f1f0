#pragma once

#include "gtm/core.hpp"
#include "gtm/constructive.hpp"
#include "gtm/search.hpp"
#include "gtm/experiments.hpp"
