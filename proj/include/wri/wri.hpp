#pragma once

#include "wri/collect.hpp"
#include "wri/error.hpp"
#include "wri/fixture.hpp"
#include "wri/index.hpp"
#include "wri/indicators.hpp"
#include "wri/io.hpp"
#include "wri/normalize.hpp"
#include "wri/ranking.hpp"
