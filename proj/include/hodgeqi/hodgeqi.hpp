#ifndef HODGEQI_HODGEQI_HPP
#define HODGEQI_HODGEQI_HPP

#include "hodgeqi/boundary_interp.hpp"
#include "hodgeqi/bounded_scheme.hpp"
#include "hodgeqi/convergence.hpp"
#include "hodgeqi/experiment.hpp"
#include "hodgeqi/fields.hpp"
#include "hodgeqi/grid_field.hpp"
#include "hodgeqi/hodge_oracle.hpp"
#include "hodgeqi/lattice_qi.hpp"
#include "hodgeqi/matern.hpp"
#include "hodgeqi/matrix_kernel.hpp"
#include "hodgeqi/multipoly.hpp"
#include "hodgeqi/radial_expr.hpp"
#include "hodgeqi/rational.hpp"
#include "hodgeqi/stencil.hpp"
#include "hodgeqi/svg_plot.hpp"

#endif  // HODGEQI_HODGEQI_HPP
