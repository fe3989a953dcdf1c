#pragma once

#include "ribbonlab/alexander.hpp"
#include "ribbonlab/error.hpp"
#include "ribbonlab/generate.hpp"
#include "ribbonlab/moves.hpp"
#include "ribbonlab/quandle.hpp"
#include "ribbonlab/ribbon.hpp"
#include "ribbonlab/search.hpp"
