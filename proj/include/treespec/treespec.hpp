#pragma once

// Umbrella header: exact secular polynomials of metric trees, the type-m
// stratification of the singular locus, torus-cohomology obstructions to
// uniform discreteness, and numeric spectra with multiplicities.

#include "treespec/errors.hpp"
#include "treespec/multipoly.hpp"
#include "treespec/tree_graph.hpp"
#include "treespec/poly_matrix.hpp"
#include "treespec/scattering.hpp"
#include "treespec/eigenspace.hpp"
#include "treespec/strata.hpp"
#include "treespec/sampling.hpp"
#include "treespec/reconstruct.hpp"
#include "treespec/exterior.hpp"
#include "treespec/lattice.hpp"
#include "treespec/obstruction.hpp"
#include "treespec/spectrum.hpp"
#include "treespec/io.hpp"
#include "treespec/verify.hpp"
