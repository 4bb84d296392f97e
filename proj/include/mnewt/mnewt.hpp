#pragma once

#include "mnewt/direction.hpp"
#include "mnewt/linesearch.hpp"
#include "mnewt/matrix_io.hpp"
#include "mnewt/problems.hpp"
#include "mnewt/solver.hpp"
#include "mnewt/sphere_eig.hpp"
#include "mnewt/sym_matrix.hpp"
#include "mnewt/vec.hpp"
