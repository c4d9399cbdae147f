#pragma once

#include "muntz/specfun.hpp"
#include "muntz/quadrature.hpp"
#include "muntz/muntz_basis.hpp"
#include "muntz/problem.hpp"
#include "muntz/collocation.hpp"
#include "muntz/analysis.hpp"
#include "muntz/config.hpp"
#include "muntz/run.hpp"
