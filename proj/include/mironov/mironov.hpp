#pragma once

#include "mironov/error.hpp"
#include "mironov/linalg.hpp"
#include "mironov/pluecker.hpp"
#include "mironov/symplectic.hpp"
#include "mironov/moment.hpp"
#include "mironov/random.hpp"
#include "mironov/real_locus.hpp"
#include "mironov/parallel.hpp"
#include "mironov/cycle.hpp"
#include "mironov/report.hpp"
