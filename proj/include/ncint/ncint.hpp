#pragma once

#include "ncint/errors.hpp"
#include "ncint/rational.hpp"
#include "ncint/matrix.hpp"
#include "ncint/jet.hpp"
#include "ncint/quasidet.hpp"
#include "ncint/moments.hpp"
#include "ncint/matpoly.hpp"
#include "ncint/mops.hpp"
#include "ncint/residual_report.hpp"
#include "ncint/band_operator.hpp"
#include "ncint/lattice.hpp"
#include "ncint/discrete.hpp"
#include "ncint/volterra.hpp"
#include "ncint/kdv.hpp"
#include "ncint/random.hpp"
#include "ncint/checks.hpp"
