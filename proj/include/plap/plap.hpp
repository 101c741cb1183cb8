#pragma once

#include "plap/bounds.hpp"
#include "plap/calculus.hpp"
#include "plap/energy.hpp"
#include "plap/error.hpp"
#include "plap/graph.hpp"
#include "plap/problem.hpp"
#include "plap/quadrature.hpp"
#include "plap/solver.hpp"
