#pragma once

//! Umbrella header: Laurent polynomials, certified torus evaluation, Mahler
//! measures, algebraic dynamics, knot torsion, probes and the auxiliary
//! polynomial construction.

#include "bigint.hpp"
#include "certified.hpp"
#include "csv.hpp"
#include "dynamics.hpp"
#include "error.hpp"
#include "exact_sum.hpp"
#include "experiment.hpp"
#include "lattice.hpp"
#include "laurent_poly.hpp"
#include "mahler.hpp"
#include "matrix.hpp"
#include "parallel.hpp"
#include "poly_io.hpp"
#include "probe.hpp"
#include "real.hpp"
#include "roots.hpp"
#include "siegel.hpp"
#include "sweep.hpp"
#include "topology.hpp"
#include "torsion_point.hpp"
#include "uni_poly.hpp"
#include "zero_test.hpp"
