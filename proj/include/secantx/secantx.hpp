#pragma once

#include "secantx/analysis.hpp"
#include "secantx/divdiff.hpp"
#include "secantx/funcspec.hpp"
#include "secantx/iterate.hpp"
#include "secantx/real.hpp"
