#pragma once

#include "walkmult/cospectral.hpp"
#include "walkmult/eigenstructure.hpp"
#include "walkmult/generators.hpp"
#include "walkmult/graph.hpp"
#include "walkmult/graph_io.hpp"
#include "walkmult/linalg.hpp"
#include "walkmult/matrix.hpp"
#include "walkmult/multiplets.hpp"
#include "walkmult/plot.hpp"
#include "walkmult/random.hpp"
#include "walkmult/rational.hpp"
#include "walkmult/report.hpp"
#include "walkmult/scalar.hpp"
#include "walkmult/script.hpp"
#include "walkmult/symmetry.hpp"
#include "walkmult/transforms.hpp"
